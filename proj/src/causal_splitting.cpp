#include "egqft/causal_splitting.hpp"

#include "egqft/numerics.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <sstream>

namespace egq {

namespace {
constexpr double pi = boost::math::constants::pi<double>();
constexpr double kQuadTol = 1e-11;
}  // namespace

SpectralDensity bubble_density(double m1, double m2, double pairing_weight) {
    if (m1 < 0 || m2 < 0) throw std::invalid_argument("bubble_density: negative mass");
    SpectralDensity d;
    d.threshold = (m1 + m2) * (m1 + m2);
    d.growth_exponent = 0.0;
    d.rho = [=](double s) {
        if (s <= (m1 + m2) * (m1 + m2) || s <= 0) return 0.0;
        return pairing_weight * two_body_phase_space(m1, m2, s);
    };
    std::ostringstream os;
    os << "bubble(" << m1 << "," << m2 << ")";
    d.label = os.str();
    return d;
}

std::string to_string(Prescription p) {
    switch (p) {
        case Prescription::feynman: return "feynman";
        case Prescription::advanced: return "advanced";
        case Prescription::retarded: return "retarded";
    }
    return "feynman";
}

SelfEnergy::SelfEnergy(SpectralDensity density, int n_sub)
    : density_(std::move(density)), n_sub_(n_sub), cache_(std::make_shared<Cache>()) {
    if (n_sub < 0) throw std::invalid_argument("n_sub must be nonnegative");
}

namespace {

void check_convergent(const SpectralDensity& d, int n) {
    if (static_cast<double>(n) <= d.growth_exponent) {
        const int need = static_cast<int>(std::floor(d.growth_exponent)) + 1;
        throw DomainError("dispersion integral diverges for n_sub = " + std::to_string(n) + "; at least " +
                          std::to_string(need) + " subtractions are required");
    }
    if (d.threshold <= 0 && n >= 1)
        throw DomainError("massless threshold: subtracting at q^2 = 0 is obstructed because the spectral "
                          "density does not vanish at s = 0");
}

// integral_{a}^{inf} f(s) ds for f smooth on (a, inf) with an integrable endpoint singularity at a.
double half_line(const std::function<double(double)>& f, double a, double split) {
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    double head = ts.integrate(f, a, split, kQuadTol);
    double tail = es.integrate(f, split, std::numeric_limits<double>::infinity(), kQuadTol);
    return head + tail;
}

}  // namespace

double SelfEnergy::subtraction_constant(int k) const {
    if (k < 0) throw std::invalid_argument("subtraction order must be nonnegative");
    {
        std::lock_guard lock(cache_->mutex);
        auto it = cache_->constants.find(k);
        if (it != cache_->constants.end()) return it->second;
    }
    check_convergent(density_, k + 1);
    const double s0 = density_.threshold;
    auto f = [&](double s) { return density_.rho(s) / std::pow(s, k + 1); };
    const double value = half_line(f, s0, 2.0 * s0 + 1.0) / pi;
    std::lock_guard lock(cache_->mutex);
    return cache_->constants.emplace(k, value).first->second;  // first writer wins
}

std::complex<double> dispersion_reduced(const SelfEnergy& se, double x, Prescription mode, double q0_sign) {
    const SpectralDensity& d = se.density();
    const int n = se.n_sub();
    check_convergent(d, n);
    const double s0 = d.threshold;
    auto h = [&](double s) { return s > s0 ? d.rho(s) / std::pow(s, n) : 0.0; };
    if (x <= s0) {
        auto f = [&](double s) { return h(s) / (s - x); };
        const double split = s0 + std::max(1.0, 2.0 * std::abs(x));
        return {half_line(f, s0, split) / pi, 0.0};
    }
    // principal value by symmetric subtraction around x, then the remaining half line
    const double width = x - s0;
    boost::math::quadrature::tanh_sinh<double> ts;
    auto sym = [&](double t) { return t == 0 ? 0.0 : (h(x + t) - h(x - t)) / t; };
    double pv = ts.integrate(sym, 0.0, width, kQuadTol);
    boost::math::quadrature::exp_sinh<double> es;
    auto tail = [&](double s) { return h(s) / (s - x); };
    pv += es.integrate(tail, x + width, std::numeric_limits<double>::infinity(), kQuadTol);
    double sign = 1.0;
    if (mode == Prescription::advanced) sign = q0_sign >= 0 ? 1.0 : -1.0;
    if (mode == Prescription::retarded) sign = q0_sign >= 0 ? -1.0 : 1.0;
    return {pv / pi, sign * h(x)};
}

std::complex<double> dispersion_eval(const SelfEnergy& se, double q2, Prescription mode, double q0_sign) {
    const std::complex<double> r = dispersion_reduced(se, q2, mode, q0_sign);
    return std::pow(q2, se.n_sub()) * r;
}

int central_subtractions(int omega) { return omega < 0 ? 0 : omega / 2 + 1; }

SelfEnergy central_normalize(const SelfEnergy& se, int omega) {
    if (se.density().threshold <= 0)
        throw DomainError("central normalization needs a massive threshold; the massless obstruction applies");
    return se.with_n_sub(central_subtractions(omega));
}

FreedomBasis freedom_basis(int omega, int n) {
    if (n < 1) throw std::invalid_argument("freedom_basis needs n >= 1");
    FreedomBasis fb;
    fb.omega = omega;
    fb.n = n;
    const std::size_t len = 4 * static_cast<std::size_t>(n);
    std::vector<int> cur(len, 0);
    auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == len) {
            cur[pos] = remaining;
            fb.multi_indices.push_back(cur);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    for (int total = 0; total <= omega; ++total) rec(rec, 0, total);
    return fb;
}

ScalingDegree scaling_degree_estimate(const std::function<double(double)>& probe, int dim,
                                      const std::vector<double>& lambdas_in) {
    std::vector<double> lambdas = lambdas_in;
    if (lambdas.empty())
        for (int k = 0; k <= 8; ++k) lambdas.push_back(std::ldexp(1.0, -k));
    ScalingDegree out;
    std::vector<double> xs, ys;
    for (double lam : lambdas) {
        const double v = probe(lam) * std::pow(lam, -dim);
        if (!std::isfinite(v) || v == 0) {
            out.indeterminate = true;
            out.diagnostics = "probe vanished or overflowed at lambda = " + std::to_string(lam);
            return out;
        }
        xs.push_back(std::log(lam));
        ys.push_back(std::log(std::abs(v)));
    }
    LinearFit fit = least_squares(xs, ys);
    out.value = -fit.slope;
    out.fit_residual = fit.residual_rms;
    if (fit.residual_rms > 0.05) {
        out.indeterminate = true;
        out.diagnostics = "log-log fit residual " + std::to_string(fit.residual_rms) + " exceeds 0.05";
    }
    return out;
}

namespace {
// Gaussian centred off the origin so that odd derivatives at 0 do not vanish.
double shifted_gaussian(const std::vector<double>& x) {
    double r2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - (i == 0 ? 0.3 : 0.0);
        r2 += d * d;
    }
    return std::exp(-0.5 * r2);
}
}  // namespace

std::function<double(double)> delta_probe(int dim) {
    return [dim](double /*lambda*/) { return shifted_gaussian(std::vector<double>(static_cast<std::size_t>(dim), 0.0)); };
}

std::function<double(double)> derivative_delta_probe(int dim) {
    return [dim](double lambda) {
        // <d0 delta, phi(./lambda)> = -d/dx0 phi(x/lambda) at 0, by central difference
        const double h = 1e-4 * lambda;
        std::vector<double> plus(static_cast<std::size_t>(dim), 0.0), minus = plus;
        plus[0] = h / lambda;
        minus[0] = -h / lambda;
        return -(shifted_gaussian(plus) - shifted_gaussian(minus)) / (2.0 * h);
    };
}

}  // namespace egq
