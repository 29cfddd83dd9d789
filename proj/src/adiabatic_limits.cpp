#include "egqft/adiabatic_limits.hpp"

#include "egqft/numerics.hpp"
#include "egqft/power_counting.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace egq {

namespace {
constexpr double pi = boost::math::constants::pi<double>();
using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
}  // namespace

// ---------------------------------------------------------------- splitting function

namespace {
double bump_h(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }

// Value on s >= 0, always in [1/2, 1] so that 1 - value is exact.
double step_nonneg(double s) {
    if (s >= 1) return 1.0;
    const double a = bump_h(1 + s), b = bump_h(1 - s);
    return a / (a + b);
}
}  // namespace

double smooth_step(double s) {
    if (std::isnan(s)) throw std::invalid_argument("smooth_step of NaN");
    return s >= 0 ? step_nonneg(s) : 1.0 - step_nonneg(-s);
}

double theta_eval(const SplittingTheta& t, const std::vector<FourVector>& ys) {
    if (static_cast<int>(ys.size()) != t.n)
        throw std::invalid_argument("theta_eval expects " + std::to_string(t.n) + " four-vectors");
    double time_sum = 0, norm2 = 0;
    for (auto& y : ys) {
        time_sum += y[0];
        for (double c : y) norm2 += c * c;
    }
    const double norm = std::sqrt(norm2);
    if (norm == 0) return 0.5;
    const double thr = norm / (3.0 * t.n);
    double outer;
    if (time_sum >= thr)
        outer = 1.0;
    else if (-time_sum >= thr)
        outer = 0.0;
    else
        outer = smooth_step(time_sum / thr);
    if (norm >= t.ell) return outer;
    // smooth interpolation towards 1/2 at the origin
    const double blend = smooth_step(2.0 * norm / t.ell - 1.0);
    return 0.5 + blend * (outer - 0.5);
}

bool in_closed_cone(const FourVector& v, int sign) {
    const double spatial = std::sqrt(v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
    return sign * v[0] >= spatial;
}

bool cone_contains(const std::vector<FourVector>& ys, const std::vector<FourVector>& xs, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("cone sign must be +1 or -1");
    for (auto& y : ys) {
        bool found = false;
        for (auto& x : xs) {
            FourVector d{y[0] - x[0], y[1] - x[1], y[2] - x[2], y[3] - x[3]};
            if (in_closed_cone(d, sign)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

double inclusion_constant(int n) {
    if (n < 1) throw std::invalid_argument("inclusion_constant needs n >= 1");
    const double s_coef = 4.0 * n + 3.0 * n * (n - 1);
    const double t_coef = 1.5 * n * (n - 1) + 0.5 * s_coef;
    return s_coef + t_coef;
}

// ---------------------------------------------------------------- test families

std::vector<double> default_schedule() {
    std::vector<double> s;
    for (int k = 0; k < 12; ++k) s.push_back(0.3 * std::pow(2.0, -0.5 * k));
    return s;
}

ScaledTestFamily gaussian_family(int dim, double width, double asymmetry) {
    ScaledTestFamily f;
    f.dim = dim;
    f.width = width;
    f.asymmetry = asymmetry;
    f.schedule = default_schedule();
    f.name = "gauss(w=" + std::to_string(width) + ",a=" + std::to_string(asymmetry) + ")";
    return f;
}

namespace {

struct SeriesFit {
    double slope = 0.0;
    double sigma = 0.0;
};

// value = a + b log(1/eps) [+ c eps^p]; returns b and its standard error.
SeriesFit fit_log_slope(const std::vector<double>& eps, const std::vector<double>& v, double p) {
    const std::size_t n = v.size();
    const std::size_t k = p > 0 ? 3 : 2;
    if (n <= k) {
        LinearFit lf = least_squares([&] {
            std::vector<double> x;
            for (double e : eps) x.push_back(std::log(1.0 / e));
            return x;
        }(), v);
        return {lf.slope, lf.slope_sigma};
    }
    std::vector<std::array<double, 3>> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back({1.0, std::log(1.0 / eps[i]), p > 0 ? std::pow(eps[i], p) : 0.0});
    // normal equations
    double A[3][3] = {}, rhs[3] = {};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < k; ++r) {
            rhs[r] += rows[i][r] * v[i];
            for (std::size_t c = 0; c < k; ++c) A[r][c] += rows[i][r] * rows[i][c];
        }
    // invert by Gauss-Jordan
    double inv[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        std::swap(inv[c], inv[piv]);
        const double d = A[c][c];
        if (d == 0) return {0.0, std::numeric_limits<double>::infinity()};
        for (std::size_t j = 0; j < k; ++j) {
            A[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            const double f = A[r][c];
            for (std::size_t j = 0; j < k; ++j) {
                A[r][j] -= f * A[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    double coef[3] = {};
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) coef[r] += inv[r][c] * rhs[c];
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double res = v[i];
        for (std::size_t r = 0; r < k; ++r) res -= coef[r] * rows[i][r];
        ss += res * res;
    }
    const double s2 = ss / static_cast<double>(n - k);
    return {coef[1], std::sqrt(std::max(0.0, s2 * inv[1][1]))};
}

struct PartLimit {
    SequenceLimit re, im;
};

PartLimit part_limits(const std::vector<LimitSample>& s, double tol, double floor) {
    std::vector<double> re, im;
    for (auto& x : s) {
        re.push_back(x.value.real());
        im.push_back(x.value.imag());
    }
    return {extrapolate_limit(re, tol, floor), extrapolate_limit(im, tol, floor)};
}

std::vector<LimitSample> sample(const SmearedEvaluator& eval, const ScaledTestFamily& fam) {
    std::vector<LimitSample> out(fam.schedule.size());
    parallel_for(fam.schedule.size(), [&](std::size_t i) {
        out[i].eps = fam.schedule[i];
        try {
            out[i].value = eval(fam, fam.schedule[i]);
        } catch (const std::exception& e) {
            throw DomainError("evaluator failed at eps = " + std::to_string(fam.schedule[i]) + ": " + e.what());
        }
    });
    return out;
}

}  // namespace

LimitReport lojasiewicz_value(const SmearedEvaluator& eval, const ScaledTestFamily& family,
                              const ScaledTestFamily& second_family, double tolerance) {
    if (family.schedule.size() < 4 || second_family.schedule.size() < 4)
        throw DomainError("Lojasiewicz estimate needs at least four eps values per family");
    LimitReport rep;
    rep.tolerance = tolerance;
    rep.samples = sample(eval, family);
    rep.second_samples = sample(eval, second_family);
    constexpr double floor = 1e-3;
    const PartLimit a = part_limits(rep.samples, tolerance, floor);
    const PartLimit b = part_limits(rep.second_samples, tolerance, floor);
    const bool each = a.re.converged && a.im.converged && b.re.converged && b.im.converged;
    // extrapolation is meaningless on a divergent sequence; report the finest sample
    rep.estimate = each ? std::complex<double>(a.re.estimate, a.im.estimate) : rep.samples.back().value;
    const std::complex<double> other{b.re.estimate, b.im.estimate};

    // log-slope on the tail window, absorbing a geometric convergent correction when present
    const std::size_t window = std::min<std::size_t>(6, rep.samples.size());
    std::vector<double> eps, val;
    for (std::size_t i = rep.samples.size() - window; i < rep.samples.size(); ++i) {
        eps.push_back(rep.samples[i].eps);
        val.push_back(rep.samples[i].value.real());
    }
    double p = 0;
    if (a.re.ratio > 0 && a.re.ratio < 0.95) {
        const double step = std::log(eps[eps.size() - 2] / eps.back());
        p = -std::log(a.re.ratio) / step;
    }
    SeriesFit fit = fit_log_slope(eps, val, p);
    rep.log_slope = fit.slope;
    rep.slope_sigma = fit.sigma;
    const double span = std::log(eps.front() / eps.back());
    rep.confidence_width = 2.0 * fit.sigma + tolerance * std::max(std::abs(rep.estimate), floor) / span;
    rep.slope_significant = std::abs(rep.log_slope) > rep.confidence_width;

    const bool agree = std::abs(rep.estimate - other) <= 2.0 * tolerance * std::max(std::abs(rep.estimate), floor);
    rep.converged = each && agree && !rep.slope_significant;
    if (!each) {
        rep.diagnostics = "sequence not converged (contraction ratio " + std::to_string(a.re.ratio) + ")";
    }
    else if (!agree) rep.diagnostics = "families disagree";
    else if (rep.slope_significant) rep.diagnostics = "significant log(1/eps) slope";
    return rep;
}

std::complex<double> smear(const std::function<std::complex<double>(const std::vector<double>&)>& t,
                           const ScaledTestFamily& family, double eps) {
    const int dim = family.dim;
    if (dim < 1 || dim > 4) throw std::invalid_argument("smear supports 1 to 4 variables");
    using G = boost::math::quadrature::gauss<double, 20>;
    const double L = 8.0 * family.width;
    const int panels = dim <= 3 ? 4 : 2;
    // 1-D nodes and weights of the Gaussian density on [-L, L]
    std::vector<double> nodes, weights;
    const auto& abs = G::abscissa();
    const auto& wts = G::weights();
    for (int p = 0; p < panels; ++p) {
        const double a = -L + 2.0 * L * p / panels, b = a + 2.0 * L / panels;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < abs.size(); ++i)
            for (int sgn : {-1, 1}) {
                if (abs[i] == 0 && sgn == 1) continue;
                const double q = mid + sgn * half * abs[i];
                const double dens = std::exp(-0.5 * q * q / (family.width * family.width)) /
                                    (std::sqrt(2.0 * pi) * family.width);
                nodes.push_back(q);
                weights.push_back(half * wts[i] * dens);
            }
    }
    const std::size_t m = nodes.size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
    std::vector<double> q(static_cast<std::size_t>(dim));
    std::complex<double> sum = 0;
    while (true) {
        double w = 1;
        for (int d = 0; d < dim; ++d) {
            q[d] = eps * nodes[idx[d]];
            w *= weights[idx[d]];
        }
        w *= 1.0 + family.asymmetry * nodes[idx[0]];
        sum += w * t(q);
        int d = 0;
        while (d < dim && ++idx[d] == m) idx[d++] = 0;
        if (d == dim) break;
    }
    return sum;
}

LimitReport lemma51_check(const std::function<double(const std::vector<double>&)>& t, const ScaledTestFamily& family,
                          const ScaledTestFamily& second_family) {
    SmearedEvaluator eval = [&](const ScaledTestFamily& f, double eps) {
        return smear([&](const std::vector<double>& q) { return std::complex<double>(t(q), 0.0); }, f, eps);
    };
    return lojasiewicz_value(eval, family, second_family);
}

// ---------------------------------------------------------------- zero-momentum demo tables

namespace {

// Push-forward of the normalized 4-D Gaussian onto u = Q^2 (even part in Q0), in closed form.
double p_even(double u) {
    if (u == 0) return 1.0 / (2.0 * pi);
    const double z = 0.5 * std::abs(u);
    const double k0 = boost::math::cyl_bessel_k(0, z), k1 = boost::math::cyl_bessel_k(1, z);
    return std::abs(u) / (4.0 * pi) * (u > 0 ? k1 - k0 : k1 + k0);
}

struct AppendixCTables {
    double y_max = 200.0, y_step = 0.05;
    std::unique_ptr<Spline> hilbert;  // PV integral of p_even(u) / (y - u)
    std::array<double, 6> moments{};
    static constexpr double u_cut = 120.0;

    double H(double y) const {
        if (y <= y_max) return (*hilbert)(y);
        double acc = 0, yp = y;
        for (double mk : moments) {
            acc += mk / yp;
            yp *= y;
        }
        return acc;
    }
};

const AppendixCTables& appendix_c_tables() {
    static std::once_flag once;
    static AppendixCTables tab;
    std::call_once(once, [] {
        for (std::size_t k = 0; k < tab.moments.size(); ++k) {
            auto f = [&](double u) { return std::pow(u, static_cast<double>(k)) * p_even(u); };
            tab.moments[k] = GK::integrate(f, -AppendixCTables::u_cut, 0.0, 15, 1e-12) +
                             GK::integrate(f, 0.0, AppendixCTables::u_cut, 15, 1e-12);
        }
        const std::size_t nh = static_cast<std::size_t>(std::lround(tab.y_max / tab.y_step)) + 1;
        std::vector<double> hv(nh);
        parallel_for(nh, [&](std::size_t i) {
            const double y = tab.y_step * static_cast<double>(i);
            auto f = [&](double t) {
                const double lo = y - t, hi = y + t;
                return ((lo > -AppendixCTables::u_cut ? p_even(lo) : 0.0) - p_even(hi)) / t;
            };
            const double reach = y + AppendixCTables::u_cut;
            // the integrand has a logarithmic kink at t = y
            double acc = 0, a = 0;
            for (double b : {0.5 * y, y, 2.0 * y + 1.0, reach}) {
                if (b <= a) continue;
                acc += GK::integrate(f, a, b, 15, 1e-12);
                a = b;
            }
            hv[i] = acc;
        });
        tab.hilbert = std::make_unique<Spline>(hv.begin(), hv.end(), 0.0, tab.y_step);
    });
    return tab;
}

// Real part of the central self-energy of the massive bubble on [0, s_max].
struct SigmaTable {
    double mass = 1.0, s_max = 40.0;
    std::unique_ptr<Spline> below;  // in v = sqrt(threshold - s)
    std::unique_ptr<Spline> above;  // in s
    double threshold = 4.0, v_step = 0.0, s_step = 0.0;

    double operator()(double s) const {
        if (s < 0 || s > s_max) throw std::out_of_range("self-energy table queried outside [0, s_max]");
        if (s <= threshold) return (*below)(std::sqrt(threshold - s));
        return (*above)(s);
    }
};

const SigmaTable& sigma_table(double mass) {
    static std::mutex mutex;
    static std::map<double, std::unique_ptr<SigmaTable>> tables;
    std::lock_guard lock(mutex);
    auto& slot = tables[mass];
    if (slot) return *slot;
    auto t = std::make_unique<SigmaTable>();
    t->mass = mass;
    t->threshold = 4.0 * mass * mass;
    t->s_max = std::max(40.0, 2.0 * t->threshold);
    const SelfEnergy se = central_normalize(SelfEnergy(bubble_density(mass, mass), 0), 2);
    const std::size_t nb = 401, na = 1801;
    const double v_max = std::sqrt(t->threshold);
    t->v_step = v_max / static_cast<double>(nb - 1);
    t->s_step = (t->s_max - t->threshold) / static_cast<double>(na - 1);
    std::vector<double> bv(nb), av(na);
    parallel_for(nb + na, [&](std::size_t i) {
        if (i < nb) {
            const double v = t->v_step * static_cast<double>(i);
            bv[i] = dispersion_eval(se, t->threshold - v * v, Prescription::feynman).real();
        } else {
            const std::size_t j = i - nb;
            double s = t->threshold + t->s_step * static_cast<double>(j);
            if (j == 0) s += 1e-9 * t->threshold;  // PV is continuous at threshold
            av[j] = dispersion_eval(se, s, Prescription::feynman).real();
        }
    });
    t->below = std::make_unique<Spline>(bv.begin(), bv.end(), 0.0, t->v_step);
    t->above = std::make_unique<Spline>(av.begin(), av.end(), t->threshold, t->s_step);
    slot = std::move(t);
    return *slot;
}

double massive_mass(const ModelSpec& model) {
    for (auto& f : model.fields.fields)
        if (f.qn.mass > 0) return f.qn.mass;
    throw DomainError("model '" + model.name + "' has no massive field for the self-energy insertion");
}

bool has_massless_field(const ModelSpec& model) {
    for (auto& f : model.fields.fields)
        if (f.qn.mass == 0) return true;
    return false;
}

}  // namespace

AppendixCResult appendix_c_demo(const ModelSpec& model, const AppendixCOptions& opts) {
    std::vector<double> schedule = opts.schedule.empty() ? default_schedule() : opts.schedule;
    if (schedule.size() < 6)
        throw DomainError("eps schedule has " + std::to_string(schedule.size()) + " points; at least 6 are needed");
    if (!has_massless_field(model))
        throw DomainError("model '" + model.name + "' has no massless field carrying the external momentum");
    const double mass = massive_mass(model);
    const SigmaTable& sig = sigma_table(mass);
    const AppendixCTables& tab = appendix_c_tables();

    const double c = opts.c_mis;
    const SwitchProfile prof = opts.profile;
    auto rho_d = [&sig, c, prof](double s) {
        if (s <= 0 || s >= sig.s_max) return 0.0;
        const double f = prof == SwitchProfile::flat ? std::exp(-s) : s * std::exp(-s);
        return f * (c + sig(s)) / (8.0 * pi);
    };
    const double rho0 = prof == SwitchProfile::flat ? c / (8.0 * pi) : 0.0;
    const double a = opts.asymmetry;

    auto real_part = [&](double eps) {
        const double y_cut = sig.s_max / (eps * eps);
        auto head = [&](double y) { return rho_d(eps * eps * y) * tab.H(y); };
        const double y1 = std::min(tab.y_max, y_cut);
        double r = GK::integrate(head, 0.0, y1, 20, 1e-11);
        if (y_cut > tab.y_max) {
            // tail in log y
            auto tail = [&](double t) {
                const double y = std::exp(t);
                return y * rho_d(eps * eps * y) * tab.H(y);
            };
            r += GK::integrate(tail, std::log(tab.y_max), std::log(y_cut), 20, 1e-11);
        }
        return r / pi;
    };
    auto imag_part = [&](double eps) {
        // odd push-forward of (1 + a Q0) Gauss onto u = Q^2 > 0
        auto f = [&](double u) { return rho_d(eps * eps * u) * (a / pi) * std::exp(-0.5 * u) * std::sqrt(pi) / 4.0; };
        return GK::integrate(f, 0.0, std::min(80.0, sig.s_max / (eps * eps)), 15, 1e-12);
    };

    auto make_eval = [&](int sign) -> SmearedEvaluator {
        return [=](const ScaledTestFamily& fam, double eps) {
            const double e = eps * fam.width;
            if (sign == 0) return std::complex<double>(0.0, 2.0 * imag_part(e));
            return std::complex<double>(real_part(e), sign * imag_part(e));
        };
    };
    ScaledTestFamily f1 = gaussian_family(4, 1.0, a), f2 = gaussian_family(4, 1.5, a);
    f1.schedule = f2.schedule = schedule;
    AppendixCResult res;
    res.advanced = lojasiewicz_value(make_eval(+1), f1, f2);
    res.retarded = lojasiewicz_value(make_eval(-1), f1, f2);
    res.difference = lojasiewicz_value(make_eval(0), f1, f2);
    res.expected_slope = 2.0 * rho0 / pi;
    return res;
}

// ---------------------------------------------------------------- Gell-Mann and Low comparison

namespace {

// exp(-r^2 - c^2) sinh(2 r c) / (2 r c), overflow-free
double gauss_sinh(double r, double c) {
    const double z = 2.0 * r * c;
    if (z < 1e-6) return std::exp(-r * r - c * c) * (1.0 + z * z / 6.0);
    return (std::exp(-(r - c) * (r - c)) - std::exp(-(r + c) * (r + c))) / (2.0 * z);
}

// Density of eta^2 under dmu_0(k1) dmu_0(k2) d^4 eta exp(-|eta - c|^2 - |k1 + k2|_E^2 / 4).
double pushforward_b(double u) {
    using G = boost::math::quadrature::gauss<double, 20>;
    using Gx = boost::math::quadrature::gauss<double, 15>;
    const double kmax = 8.0;
    auto over_eta = [u](double c0, double cv) {
        if (u < 0) {
            auto f = [&](double eta0) {
                const double r = std::sqrt(eta0 * eta0 - u);
                return std::exp(-(eta0 - c0) * (eta0 - c0)) * 4.0 * pi * gauss_sinh(r, cv) * r * 0.5;
            };
            double s = 0;
            for (int p = -3; p < 3; ++p) s += G::integrate(f, c0 + 2.5 * p, c0 + 2.5 * (p + 1));
            return s;
        }
        auto f = [&](double r) {
            const double eta0 = std::sqrt(u + r * r);
            if (eta0 == 0) return 0.0;
            const double w = 4.0 * pi * gauss_sinh(r, cv) * r * r / (2.0 * eta0);
            return w * (std::exp(-(eta0 - c0) * (eta0 - c0)) + std::exp(-(eta0 + c0) * (eta0 + c0)));
        };
        const double rmax = cv + 7.0;
        return G::integrate(f, 0.0, rmax / 3) + G::integrate(f, rmax / 3, 2 * rmax / 3) +
               G::integrate(f, 2 * rmax / 3, rmax);
    };
    auto over_x = [&](double ka, double kb) {
        auto f = [&](double x) {
            const double c0 = 0.5 * (ka - kb);
            const double cv = 0.5 * std::sqrt(std::max(0.0, ka * ka + kb * kb - 2.0 * ka * kb * x));
            const double sum_e = (ka + kb) * (ka + kb) + ka * ka + kb * kb + 2.0 * ka * kb * x;
            return std::exp(-0.25 * sum_e) * over_eta(c0, cv);
        };
        return Gx::integrate(f, -1.0, 1.0);
    };
    auto over_b = [&](double ka) {
        auto f = [&](double kb) { return ka * kb * over_x(ka, kb); };
        return G::integrate(f, 0.0, kmax);
    };
    return G::integrate(over_b, 0.0, kmax) / (32.0 * pi * pi * pi * pi);
}

struct DecayTable {
    double u_min = -30.0, u_step = 0.25;
    std::vector<double> density;
};

const DecayTable& decay_table() {
    static std::once_flag once;
    static DecayTable tab;
    std::call_once(once, [] {
        const std::size_t n = static_cast<std::size_t>(std::lround(-2.0 * tab.u_min / tab.u_step)) + 1;
        tab.density.assign(n, 0.0);
        parallel_for(n, [&](std::size_t i) { tab.density[i] = pushforward_b(tab.u_min + tab.u_step * static_cast<double>(i)); });
    });
    return tab;
}

}  // namespace

DecayReport gl_vs_eg_second_order(const ModelSpec& model, const GlVsEgOptions& opts) {
    std::vector<double> schedule = opts.schedule.empty() ? default_schedule() : opts.schedule;
    if (schedule.size() < 2) throw DomainError("decay fit needs at least two eps values");
    DecayReport rep;
    rep.eps = schedule;
    if (opts.order == 0) {
        // both expressions reduce to the free propagator
        rep.difference.assign(schedule.size(), 0.0);
        rep.exponent = std::numeric_limits<double>::infinity();
        rep.warnings.push_back("order 0: difference vanishes identically");
        return rep;
    }
    if (opts.order != 2) throw DomainError("only orders 0 and 2 are implemented");
    if (!has_massless_field(model)) throw DomainError("model '" + model.name + "' has no massless external field");
    const double mass = massive_mass(model);

    // power-counting index of the bubble from the vertex derivative by the massless field
    int omega = 2;
    for (auto& v : model.vertices)
        for (FieldId f = 0; f < model.fields.size(); ++f)
            if (model.fields.at(f).qn.mass == 0) {
                Polynomial d = derive(v.poly, Generator{f, {0, 0, 0, 0}}, model.fields);
                if (d.is_zero()) continue;
                const Rational dim = canonical_dim(d, model.fields);
                omega = omega_general({dim, dim}, model.c_const).value();
            }
    const int central = central_subtractions(omega);
    const int n_sub = opts.n_sub < 0 ? central : opts.n_sub;
    const SelfEnergy se(bubble_density(mass, mass), n_sub);
    if (n_sub < central) {
        rep.normalized = false;
        rep.warnings.push_back("self-energy is not normalized: n_sub = " + std::to_string(n_sub) + " < " +
                               std::to_string(central));
    }
    if (opts.constant_shift != 0) {
        rep.normalized = false;
        rep.warnings.push_back("self-energy shifted by a constant; normalization condition violated");
    }

    const DecayTable& tab = decay_table();
    const std::size_t n = tab.density.size();
    const std::vector<double> w = simpson_weights(n, tab.u_step);
    constexpr double K = -1.0;
    rep.difference.assign(schedule.size(), 0.0);
    std::vector<std::complex<double>> sigma(n * schedule.size());
    parallel_for(sigma.size(), [&](std::size_t idx) {
        const std::size_t e = idx / n, i = idx % n;
        const double u = tab.u_min + tab.u_step * static_cast<double>(i);
        const double x = schedule[e] * schedule[e] * u;
        sigma[idx] = dispersion_eval(se, x, Prescription::feynman) + opts.constant_shift;
    });
    std::vector<double> lx, ly;
    for (std::size_t e = 0; e < schedule.size(); ++e) {
        std::complex<double> acc = 0;
        for (std::size_t i = 0; i < n; ++i) acc += w[i] * tab.density[i] * sigma[e * n + i];
        rep.difference[e] = K * acc;
        if (std::abs(acc) > 0) {
            lx.push_back(std::log(schedule[e]));
            ly.push_back(std::log(std::abs(acc)));
        }
    }
    if (lx.size() < 2) {
        rep.exponent = std::numeric_limits<double>::infinity();
        rep.warnings.push_back("difference vanishes on the schedule");
        return rep;
    }
    LinearFit fit = least_squares(lx, ly);
    rep.exponent = fit.slope;
    rep.exponent_sigma = fit.slope_sigma;
    if (rep.exponent < 0.8) rep.warnings.push_back("decay exponent below 0.8: the adiabatic limit is not reached");
    return rep;
}

}  // namespace egq
