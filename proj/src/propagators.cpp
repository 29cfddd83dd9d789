#include "egqft/propagators.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>

namespace egq {

namespace {
constexpr double pi = boost::math::constants::pi<double>();
}

// ---------------------------------------------------------------- gamma matrices

GammaMatrix identity4() {
    GammaMatrix m;
    for (std::size_t a = 0; a < 4; ++a) m[a][a] = CRational(1);
    return m;
}

GammaMatrix gamma(int mu) {
    if (mu < 0 || mu > 3) throw std::out_of_range("gamma index must be 0..3");
    GammaMatrix g;
    const CRational one(1), i = CRational::imag_unit();
    if (mu == 0) {
        g[0][0] = one;
        g[1][1] = one;
        g[2][2] = -one;
        g[3][3] = -one;
        return g;
    }
    // Pauli block sigma^k in the upper right, -sigma^k in the lower left
    std::array<std::array<CRational, 2>, 2> s;
    if (mu == 1) s = {{{CRational(0), one}, {one, CRational(0)}}};
    if (mu == 2) s = {{{CRational(0), -i}, {i, CRational(0)}}};
    if (mu == 3) s = {{{one, CRational(0)}, {CRational(0), -one}}};
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            g[a][b + 2] = s[a][b];
            g[a + 2][b] = -s[a][b];
        }
    return g;
}

GammaMatrix matmul(const GammaMatrix& a, const GammaMatrix& b) {
    GammaMatrix c;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            CRational acc;
            for (std::size_t k = 0; k < 4; ++k)
                if (!a[i][k].is_zero() && !b[k][j].is_zero()) acc += a[i][k] * b[k][j];
            c[i][j] = acc;
        }
    return c;
}

GammaMatrix operator+(const GammaMatrix& a, const GammaMatrix& b) {
    GammaMatrix c;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

GammaMatrix scale(const GammaMatrix& a, const CRational& s) {
    GammaMatrix c;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) c[i][j] = a[i][j] * s;
    return c;
}

bool operator==(const GammaMatrix& a, const GammaMatrix& b) {
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (a[i][j] != b[i][j]) return false;
    return true;
}

CRational trace(const GammaMatrix& a) {
    CRational t;
    for (std::size_t i = 0; i < 4; ++i) t += a[i][i];
    return t;
}

CRational gamma_trace(const std::vector<int>& indices) {
    GammaMatrix m = identity4();
    for (int mu : indices) m = matmul(m, gamma(mu));
    return trace(m);
}

// ---------------------------------------------------------------- momentum polynomials

std::complex<double> evaluate(const MomentumPoly& p, const FourVector& k_lower, double mass) {
    std::complex<double> sum = 0;
    for (auto& [mono, c] : p) {
        double v = std::pow(mass, mono.m_power);
        for (std::size_t mu = 0; mu < 4; ++mu) v *= std::pow(k_lower[mu], mono.k_power[mu]);
        sum += c.to_complex() * v;
    }
    return sum;
}

int degree_in_k(const MomentumPoly& p) {
    int d = 0;
    for (auto& [mono, c] : p)
        if (!c.is_zero()) d = std::max(d, order(mono.k_power));
    return d;
}

std::string to_string(TwoPointKind k) {
    switch (k) {
        case TwoPointKind::scalar: return "scalar";
        case TwoPointKind::vector: return "vector";
        case TwoPointKind::dirac: return "dirac";
        case TwoPointKind::ghost: return "ghost";
    }
    return "scalar";
}

namespace {

void add(MomentumPoly& p, const MomentumMonomial& m, const CRational& c) {
    if (c.is_zero()) return;
    auto& slot = p[m];
    slot += c;
    if (slot.is_zero()) p.erase(m);
}

CRational ipow(int n) {  // i^n
    switch (((n % 4) + 4) % 4) {
        case 0: return CRational(1);
        case 1: return CRational::imag_unit();
        case 2: return CRational(-1);
        default: return -CRational::imag_unit();
    }
}

}  // namespace

std::optional<TwoPointKey> two_point(const ModelSpec& model, const Generator& gL, const Generator& gR) {
    const FieldTable& ft = model.fields;
    const FieldInfo& L = ft.at(gL.field);
    const FieldInfo& R = ft.at(gR.field);
    if (ft.multiplets.at(static_cast<std::size_t>(L.multiplet)).adjoint != R.multiplet) return std::nullopt;
    if (L.qn.mass != R.qn.mass) return std::nullopt;
    if (L.qn.charge + R.qn.charge != 0) return std::nullopt;

    TwoPointKey key;
    key.left = gL;
    key.right = gR;
    key.mass = L.qn.mass;
    const CRational i = CRational::imag_unit();
    MomentumPoly base;
    switch (L.kind) {
        case FieldKind::scalar:
            key.kind = TwoPointKind::scalar;
            add(base, {}, -i);
            break;
        case FieldKind::ghost:
            key.kind = TwoPointKind::ghost;
            add(base, {}, i);
            break;
        case FieldKind::vector:
            key.kind = TwoPointKind::vector;
            if (key.mass > 0 || L.component != R.component) return std::nullopt;
            add(base, {}, i * CRational(metric(L.component)));
            break;
        case FieldKind::dirac: {
            key.kind = TwoPointKind::dirac;
            // psi_a psi*_b  -> -i [(kslash + m) g0]_ab ; psi*_b psi_a -> -i [(kslash - m) g0]_ab
            const bool psi_left = L.qn.fermion > 0;
            const auto a = static_cast<std::size_t>(psi_left ? L.component : R.component);
            const auto b = static_cast<std::size_t>(psi_left ? R.component : L.component);
            const GammaMatrix g0 = gamma(0);
            for (int mu = 0; mu < 4; ++mu) {
                GammaMatrix gg = matmul(gamma(mu), g0);
                MomentumMonomial m;
                m.k_power[static_cast<std::size_t>(mu)] = 1;
                add(base, m, -i * gg[a][b]);
            }
            MomentumMonomial mm;
            mm.m_power = 1;
            add(base, mm, (psi_left ? -i : i) * g0[a][b]);
            break;
        }
    }
    // derivatives: d/dx_L -> -i k, d/dx_R -> +i k
    CRational dfac = ipow(-order(gL.alpha)) * ipow(order(gR.alpha));
    for (auto& [mono, c] : base) {
        MomentumMonomial m = mono;
        for (std::size_t mu = 0; mu < 4; ++mu) m.k_power[mu] += gL.alpha[mu] + gR.alpha[mu];
        add(key.prefactor, m, c * dfac);
    }
    if (key.prefactor.empty()) return std::nullopt;
    return key;
}

// ---------------------------------------------------------------- propagators

std::complex<double> feynman_propagator(double mass, const FourVector& q, double iepsilon) {
    if (iepsilon < 0) throw std::invalid_argument("iepsilon must be nonnegative");
    const double x = minkowski_square(q) - mass * mass;
    if (iepsilon == 0) {
        if (std::abs(x) <= 1e-14 * std::max(1.0, mass * mass))
            throw DomainError("Feynman propagator evaluated on the mass shell in strict mode");
        return {0.0, 1.0 / x};
    }
    return std::complex<double>(0.0, 1.0) / std::complex<double>(x, iepsilon);
}

PvDeltaSplit feynman_propagator_split() {
    // i/(x + i0) = i PV(1/x) + pi delta(x)
    return {std::complex<double>(0.0, 1.0), std::complex<double>(pi, 0.0)};
}

double two_body_phase_space(double m1, double m2, double s) {
    if (s <= 0) throw DomainError("two-body phase space needs s > 0");
    if (m1 < 0 || m2 < 0) throw std::invalid_argument("negative mass");
    const double rs = std::sqrt(s);
    if (rs <= m1 + m2) return 0.0;
    auto f = [&](double p) { return rs - std::sqrt(p * p + m1 * m1) - std::sqrt(p * p + m2 * m2); };
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t iters = 200;
    auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.0, rs, tol, iters);
    const double p = 0.5 * (lo + hi);
    const double e1 = std::sqrt(p * p + m1 * m1), e2 = std::sqrt(p * p + m2 * m2);
    const double dfdp = p / e1 + p / e2;
    // (2pi)^-2 * 4 pi * p^2 / (4 E1 E2) / |f'(p)|
    return p * p / (4.0 * e1 * e2 * dfdp) / pi;
}

double two_body_phase_space_frame(double m1, double m2, const FourVector& q) {
    const double s = minkowski_square(q);
    if (s <= 0 || q[0] <= 0) throw DomainError("two-body phase space needs a future timelike total momentum");
    const double qv = std::sqrt(q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    if (qv == 0) return two_body_phase_space(m1, m2, s);
    if (std::sqrt(s) <= m1 + m2) return 0.0;
    // Angular delta leaves the E1-interval where |cos| <= 1: g(E1) <= 0 with
    // g = (2 q0 E1 - (s + m1^2 - m2^2))^2 - 4 |q|^2 (E1^2 - m1^2)
    const double K = s + m1 * m1 - m2 * m2;
    auto g = [&](double e1) {
        double t = 2.0 * q[0] * e1 - K;
        return t * t - 4.0 * qv * qv * (e1 * e1 - m1 * m1);
    };
    const double e_min_point = q[0] * K / (2.0 * s);  // vertex of the parabola
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t it1 = 200, it2 = 200;
    double lo_bracket = std::max(m1, 0.0);
    auto r1 = boost::math::tools::toms748_solve(g, lo_bracket, e_min_point, tol, it1);
    double hi = e_min_point + 1.0;
    while (g(hi) < 0) hi = e_min_point + 2.0 * (hi - e_min_point);
    auto r2 = boost::math::tools::toms748_solve(g, e_min_point, hi, tol, it2);
    const double e_lo = 0.5 * (r1.first + r1.second), e_hi = 0.5 * (r2.first + r2.second);
    return (e_hi - e_lo) / (8.0 * pi * qv);
}

// ---------------------------------------------------------------- Riesz distribution

double riesz_s(const FourVector& k) {
    const double k2 = minkowski_square(k);
    if (k[0] < 0 || k2 < 0) return 0.0;
    return pi * pi * pi / 4.0 * k2;
}

namespace {

using Poly = std::vector<double>;  // coefficients, lowest degree first

Poly poly_derivative(const Poly& p) {
    Poly d;
    for (std::size_t n = 1; n < p.size(); ++n) d.push_back(static_cast<double>(n) * p[n]);
    return d;
}

Poly poly_axpy(const Poly& a, double s, const Poly& b) {  // a + s b
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (std::size_t n = 0; n < a.size(); ++n) r[n] += a[n];
    for (std::size_t n = 0; n < b.size(); ++n) r[n] += s * b[n];
    return r;
}

double poly_eval(const Poly& p, double x) {
    double v = 0;
    for (std::size_t n = p.size(); n-- > 0;) v = v * x + p[n];
    return v;
}

// Laplacian acting on P(u) exp(-beta u) with u = |k|^2 in three dimensions:
// Delta f = 4 u f'' + 6 f'.
Poly radial_laplacian(const Poly& P, double beta) {
    Poly d1 = poly_axpy(poly_derivative(P), -beta, P);   // (P' - beta P)
    Poly d2 = poly_axpy(poly_derivative(d1), -beta, d1);  // second derivative coefficient
    Poly u_d2(d2.size() + 1, 0.0);
    for (std::size_t n = 0; n < d2.size(); ++n) u_d2[n + 1] = 4.0 * d2[n];
    return poly_axpy(u_d2, 6.0, d1);
}

// probabilists' Hermite polynomial He_n
Poly hermite(int n) {
    Poly a{1.0}, b{0.0, 1.0};
    if (n == 0) return a;
    for (int k = 1; k < n; ++k) {
        Poly x_b(b.size() + 1, 0.0);
        for (std::size_t j = 0; j < b.size(); ++j) x_b[j + 1] = b[j];
        Poly c = poly_axpy(x_b, -static_cast<double>(k), a);
        a = b;
        b = c;
    }
    return b;
}

}  // namespace

RieszCheck riesz_check(double width, double shift) {
    if (width <= 0) throw std::invalid_argument("width must be positive");
    const double beta = 1.0 / (2.0 * width * width);
    // (-Delta)^m acting on the radial Gaussian
    std::array<Poly, 4> lap;
    lap[0] = Poly{1.0};
    for (int m = 1; m <= 3; ++m) lap[static_cast<std::size_t>(m)] = radial_laplacian(lap[static_cast<std::size_t>(m - 1)], beta);
    std::array<Poly, 4> herm;
    for (int j = 0; j <= 3; ++j) herm[static_cast<std::size_t>(j)] = hermite(2 * j);
    const std::array<double, 4> binom{1, 3, 3, 1};

    auto box3_g = [&](double k0, double r) {
        const double t = (k0 - shift) / width;
        const double G = std::exp(-0.5 * t * t);
        const double u = r * r;
        const double R = std::exp(-beta * u);
        double acc = 0;
        for (std::size_t j = 0; j <= 3; ++j) {
            const double dk0 = poly_eval(herm[j], t) * G / std::pow(width, 2.0 * static_cast<double>(j));
            const double sign = ((3 - j) & 1) ? -1.0 : 1.0;
            acc += binom[j] * dk0 * sign * poly_eval(lap[3 - j], u) * R;
        }
        return acc;
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double k0_max = std::max(shift, 0.0) + 14.0 * width;
    auto inner = [&](double k0) {
        auto f = [&](double r) { return 4.0 * pi * r * r * (k0 * k0 - r * r) * box3_g(k0, r); };
        return GK::integrate(f, 0.0, k0, 12, 1e-13);
    };
    double pairing = pi * pi * pi / 4.0 * GK::integrate(inner, 0.0, k0_max, 12, 1e-13);
    RieszCheck out;
    out.pairing = pairing;
    const double g0 = std::exp(-0.5 * shift * shift / (width * width));
    out.expected = std::pow(2.0 * pi, 4) * g0;
    out.residual = std::abs(out.pairing - out.expected) / std::abs(out.expected);
    return out;
}

}  // namespace egq
