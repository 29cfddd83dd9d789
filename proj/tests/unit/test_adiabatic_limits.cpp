#include "doctest.h"
#include "generators.hpp"

#include "egqft/adiabatic_limits.hpp"
#include "egqft/model_registry.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

using namespace egq;
using namespace egq::testgen;

namespace {

constexpr double pi = boost::math::constants::pi<double>();

FourVector random_four(double r) { return {uniform_real(-r, r), uniform_real(-r, r), uniform_real(-r, r), uniform_real(-r, r)}; }

double euclid(const std::vector<FourVector>& v) {
    double s = 0;
    for (auto& x : v)
        for (double c : x) s += c * c;
    return std::sqrt(s);
}

std::vector<FourVector> scaled(std::vector<FourVector> v, double f) {
    for (auto& x : v)
        for (double& c : x) c *= f;
    return v;
}

// v in the closed forward cone, spatial part uniform in a ball
FourVector random_forward(double r) {
    FourVector v{0, uniform_real(-r, r), uniform_real(-r, r), uniform_real(-r, r)};
    v[0] = std::sqrt(v[1] * v[1] + v[2] * v[2] + v[3] * v[3]) + uniform_real(0, r);
    return v;
}

ScaledTestFamily with_schedule(ScaledTestFamily f, std::vector<double> s) {
    f.schedule = std::move(s);
    return f;
}

}  // namespace

TEST_CASE("smooth step") {
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(0.0) == 0.5);
    double last = 0;
    for (int k = -200; k <= 200; ++k) {
        const double s = k / 100.0;
        CHECK(smooth_step(s) + smooth_step(-s) == 1.0);
        CHECK(smooth_step(s) >= last);
        last = smooth_step(s);
    }
    CHECK_THROWS_AS(smooth_step(std::nan("")), std::invalid_argument);
}

TEST_CASE("splitting function: support, antisymmetry and scale invariance") {
    for (int n = 1; n <= 3; ++n) {
        const SplittingTheta theta{n, 1.0};
        for (int trial = 0; trial < 10000; ++trial) {
            std::vector<FourVector> ys;
            for (int j = 0; j < n; ++j) ys.push_back(random_four(4.0));
            const double norm = euclid(ys);
            const double v = theta_eval(theta, ys);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (norm < theta.ell) continue;
            double time_sum = 0;
            for (auto& y : ys) time_sum += y[0];
            if (time_sum >= norm / (3.0 * n)) CHECK(v == 1.0);
            if (-time_sum >= norm / (3.0 * n)) CHECK(v == 0.0);
            CHECK(theta_eval(theta, scaled(ys, -1.0)) == 1.0 - v);
            // powers of two scale without rounding, so equality is exact
            CHECK(theta_eval(theta, scaled(ys, 2.0)) == v);
            CHECK(theta_eval(theta, scaled(ys, 1024.0)) == v);
        }
        CHECK(theta_eval(theta, std::vector<FourVector>(static_cast<std::size_t>(n), FourVector{0, 0, 0, 0})) == 0.5);
    }
    CHECK_THROWS_AS(theta_eval(SplittingTheta{2, 1.0}, {FourVector{1, 0, 0, 0}}), std::invalid_argument);
}

TEST_CASE("cones and the inclusion bound") {
    const FourVector x{0.3, -1, 2, 0.5};
    CHECK(cone_contains({x, x}, {x}, 1));
    CHECK(cone_contains({x, x}, {x}, -1));
    CHECK(cone_contains({FourVector{2.3, -1, 2, 0.5}}, {x}, 1));
    CHECK_FALSE(cone_contains({FourVector{2.3, -1, 2, 0.5}}, {x}, -1));
    CHECK_FALSE(cone_contains({FourVector{0.3, 1, 2, 0.5}}, {x}, 1));
    CHECK_THROWS_AS(cone_contains({x}, {x}, 0), std::invalid_argument);
    CHECK_THROWS_AS(inclusion_constant(0), std::invalid_argument);

    // search for y in the past cones of the x's, in the support of Theta, violating |y| <= C |x|
    int counterexamples = 0, in_region = 0;
    for (int n = 1; n <= 3; ++n) {
        const SplittingTheta theta{n, 1.0};
        const double C = inclusion_constant(n);
        for (int trial = 0; trial < 35000; ++trial) {
            const int m = uniform_int(1, n);
            std::vector<FourVector> xs;
            for (int k = 0; k < m; ++k) xs.push_back(random_four(uniform_real(0, 3)));
            std::vector<FourVector> ys;
            for (int j = 0; j < n; ++j) {
                const FourVector& base = xs[static_cast<std::size_t>(uniform_int(0, m - 1))];
                const FourVector v = random_forward(uniform_real(0, 20));
                ys.push_back({base[0] - v[0], base[1] - v[1], base[2] - v[2], base[3] - v[3]});
            }
            REQUIRE(cone_contains(ys, xs, -1));
            if (euclid(ys) < theta.ell || theta_eval(theta, ys) == 0.0) continue;
            ++in_region;
            if (euclid(ys) > C * euclid(xs)) ++counterexamples;
        }
    }
    CHECK(in_region > 500);
    CHECK(counterexamples == 0);
}

TEST_CASE("Lojasiewicz values of elementary distributions") {
    const ScaledTestFamily f1 = gaussian_family(1, 1.0, 0.4), f2 = gaussian_family(1, 1.7, -0.2);

    for (double c : {1.0, -2.5}) {
        LimitReport r = lojasiewicz_value([c](const ScaledTestFamily&, double) { return std::complex<double>(c, 0); }, f1, f2);
        CHECK(r.converged);
        CHECK(std::abs(r.estimate - c) < 1e-10);
    }

    auto linear = [](const ScaledTestFamily& f, double eps) {
        return smear([](const std::vector<double>& q) { return std::complex<double>(q[0], 0); }, f, eps);
    };
    LimitReport lin = lojasiewicz_value(linear, f1, f2);
    CHECK(lin.converged);
    CHECK(std::abs(lin.estimate) < 1e-4);
    // the value scales like eps: asymmetry * width^2 * eps
    CHECK(linear(f1, 0.1).real() == doctest::Approx(0.4 * 0.1).epsilon(1e-10));

    // sgn(q) log|q|: the log eps term has coefficient integral of sgn(u) ghat(u) = asymmetry * E|u|
    auto sgnlog = [](const ScaledTestFamily& f, double eps) {
        return smear([](const std::vector<double>& q) { return std::complex<double>((q[0] > 0 ? 1 : -1) * std::log(std::abs(q[0])), 0); }, f, eps);
    };
    const ScaledTestFamily asym = gaussian_family(1, 1.0, 0.5), asym2 = gaussian_family(1, 1.3, 0.5);
    LimitReport sl = lojasiewicz_value(sgnlog, asym, asym2);
    CHECK_FALSE(sl.converged);
    CHECK(sl.slope_significant);
    const double expect_slope = -0.5 * std::sqrt(2.0 / pi);
    CHECK(sl.log_slope == doctest::Approx(expect_slope).epsilon(1e-3));

    auto failing = [](const ScaledTestFamily&, double eps) -> std::complex<double> {
        if (eps < 0.05) throw std::runtime_error("boom");
        return 1.0;
    };
    try {
        lojasiewicz_value(failing, f1, f2);
        FAIL("no error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("eps = ") != std::string::npos);
    }
    CHECK_THROWS_AS(lojasiewicz_value(linear, with_schedule(f1, {0.1, 0.05, 0.02}), f2), DomainError);
}

TEST_CASE("continuity at zero gives the point value") {
    const ScaledTestFamily f1 = gaussian_family(2, 1.0, 0.3), f2 = gaussian_family(2, 0.6, 0.0);
    LimitReport c = lemma51_check([](const std::vector<double>& q) { return std::cos(q[0]) * std::cos(q[1]); }, f1, f2);
    CHECK(c.converged);
    CHECK(c.estimate.real() == doctest::Approx(1.0).epsilon(1e-6));

    LimitReport lip = lemma51_check([](const std::vector<double>& q) { return std::abs(q[0]) + std::abs(q[1]); }, f1, f2);
    CHECK(lip.converged);
    CHECK(std::abs(lip.estimate) < 1e-4);

    // support away from the origin: vanishes once eps * 8 width < 1
    auto annulus = [](const std::vector<double>& q) {
        const double r = std::hypot(q[0], q[1]);
        return (r > 1 && r < 2) ? std::exp(-1 / ((r - 1) * (2 - r))) : 0.0;
    };
    LimitReport ann = lemma51_check(annulus, f1, f2);
    CHECK(ann.converged);
    CHECK(std::abs(ann.estimate) < 1e-12);
}

TEST_CASE("second-order advanced and retarded products at zero momentum") {
    const ModelSpec sm = builtin("scalar_model");

    AppendixCOptions zero;
    const AppendixCResult r0 = appendix_c_demo(sm, zero);
    CHECK(r0.advanced.converged);
    CHECK(r0.retarded.converged);
    CHECK(std::abs(r0.advanced.estimate - r0.retarded.estimate) <=
          2 * kLimitTolerance * std::max(std::abs(r0.advanced.estimate), 1e-3));
    CHECK(r0.expected_slope == 0.0);

    AppendixCOptions half, one;
    half.c_mis = 0.5;
    one.c_mis = 1.0;
    const AppendixCResult rh = appendix_c_demo(sm, half), r1 = appendix_c_demo(sm, one);
    CHECK_FALSE(r1.advanced.converged);
    CHECK(r1.advanced.slope_significant);
    CHECK(std::abs(r1.advanced.log_slope - rh.advanced.log_slope - (rh.advanced.log_slope - r0.advanced.log_slope)) <
          0.05 * std::abs(r1.advanced.log_slope - r0.advanced.log_slope));
    CHECK(r1.expected_slope == doctest::Approx(2 * rh.expected_slope));

    AppendixCOptions vanish = one;
    vanish.profile = SwitchProfile::vanishing_at_0;
    const AppendixCResult rv = appendix_c_demo(sm, vanish);
    CHECK(rv.difference.converged);
    CHECK(std::abs(rv.difference.estimate) < 1e-3);

    AppendixCOptions coarse;
    coarse.schedule = {0.3, 0.2, 0.1, 0.05, 0.02};
    CHECK_THROWS_AS(appendix_c_demo(sm, coarse), DomainError);
    CHECK_THROWS_AS(appendix_c_demo(builtin("spinor_qed_massless"), zero), DomainError);
}

TEST_CASE("Gell-Mann and Low against the adiabatic limit at second order") {
    const ModelSpec sm = builtin("scalar_model");
    const DecayReport rep = gl_vs_eg_second_order(sm, {});
    CHECK(rep.normalized);
    CHECK(rep.warnings.empty());
    CHECK(rep.exponent >= 0.8);
    CHECK(rep.eps.size() == default_schedule().size());

    GlVsEgOptions single;
    single.schedule = {0.1};
    CHECK_THROWS_AS(gl_vs_eg_second_order(sm, single), DomainError);

    GlVsEgOptions vacuum;
    vacuum.order = 0;
    const DecayReport v = gl_vs_eg_second_order(sm, vacuum);
    for (auto& d : v.difference) CHECK(d == std::complex<double>(0, 0));

    GlVsEgOptions shifted;
    shifted.constant_shift = 0.1;
    const DecayReport s = gl_vs_eg_second_order(sm, shifted);
    CHECK_FALSE(s.normalized);
    CHECK_FALSE(s.warnings.empty());
    CHECK(s.exponent < rep.exponent);

    GlVsEgOptions third;
    third.order = 3;
    CHECK_THROWS_AS(gl_vs_eg_second_order(sm, third), DomainError);
}
