#pragma once

#include "egqft/model_registry.hpp"

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace egq {

using FourVector = std::array<double, 4>;

// Minkowski square with signature (+,-,-,-).
inline double minkowski_square(const FourVector& k) {
    return k[0] * k[0] - k[1] * k[1] - k[2] * k[2] - k[3] * k[3];
}
inline int metric(int mu) { return mu == 0 ? 1 : -1; }

// ---------------------------------------------------------------- gamma matrices

using GammaMatrix = std::array<std::array<CRational, 4>, 4>;

GammaMatrix gamma(int mu);  // Dirac representation
GammaMatrix identity4();
GammaMatrix matmul(const GammaMatrix& a, const GammaMatrix& b);
GammaMatrix operator+(const GammaMatrix& a, const GammaMatrix& b);
GammaMatrix scale(const GammaMatrix& a, const CRational& c);
bool operator==(const GammaMatrix& a, const GammaMatrix& b);
CRational trace(const GammaMatrix& a);
// tr(gamma^{mu_1} ... gamma^{mu_n}) with upper indices.
CRational gamma_trace(const std::vector<int>& indices);

// ---------------------------------------------------------------- two-point functions

// Polynomial in the lower-index momentum components k_mu and in the mass m.
struct MomentumMonomial {
    MultiIndex k_power{0, 0, 0, 0};
    int m_power = 0;
    auto operator<=>(const MomentumMonomial&) const = default;
};
using MomentumPoly = std::map<MomentumMonomial, CRational>;

std::complex<double> evaluate(const MomentumPoly& p, const FourVector& k_lower, double mass);
int degree_in_k(const MomentumPoly& p);

enum class TwoPointKind { scalar, vector, dirac, ghost };
std::string to_string(TwoPointKind k);

// (Omega| :gL(x): :gR(y): Omega) = integral dmu_m(k) prefactor(k) exp(-ik(x-y)) * (2 pi) ...
// written as prefactor times D^(+)_m(x-y) with derivatives folded into the prefactor.
struct TwoPointKey {
    Generator left;
    Generator right;
    double mass = 0.0;
    TwoPointKind kind = TwoPointKind::scalar;
    MomentumPoly prefactor;
};

std::optional<TwoPointKey> two_point(const ModelSpec& model, const Generator& gL, const Generator& gR);

// ---------------------------------------------------------------- propagators

struct PvDeltaSplit {
    std::complex<double> pv_coefficient;     // multiplies PV 1/(q^2-m^2)
    std::complex<double> delta_coefficient;  // multiplies delta(q^2-m^2)
};

// i/(q^2 - m^2 + i eps). eps == 0 evaluates strictly and throws on shell.
std::complex<double> feynman_propagator(double mass, const FourVector& q, double iepsilon);
PvDeltaSplit feynman_propagator_split();

// Integral dmu_{m1} dmu_{m2} (2pi)^4 delta^4(q - p1 - p2), rest frame at q^2 = s.
double two_body_phase_space(double m1, double m2, double s);
// Same measure evaluated in the frame where the total momentum is q.
double two_body_phase_space_frame(double m1, double m2, const FourVector& q);

// ---------------------------------------------------------------- Riesz distribution

double riesz_s(const FourVector& k);

struct RieszCheck {
    double pairing = 0.0;   // <s, box^3 g>
    double expected = 0.0;  // (2 pi)^4 g(0)
    double residual = 0.0;  // relative
};
// Test function g(k) = exp(-((k0-shift)^2 + |k|^2) / (2 width^2)).
RieszCheck riesz_check(double width = 1.0, double shift = 0.0);

}  // namespace egq
