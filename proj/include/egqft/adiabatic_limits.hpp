#pragma once

#include "egqft/causal_splitting.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace egq {

// ---------------------------------------------------------------- regularized splitting function

// Smooth step: 0 for s <= -1, 1 for s >= 1, rho(s) + rho(-s) = 1.
double smooth_step(double s);

struct SplittingTheta {
    int n = 1;
    double ell = 1.0;
};

// ys holds n four-vectors.
double theta_eval(const SplittingTheta& t, const std::vector<FourVector>& ys);

// Exists u with y_j - x_{u(j)} in sign * closed forward cone, for every j.
bool cone_contains(const std::vector<FourVector>& ys, const std::vector<FourVector>& xs, int sign);
bool in_closed_cone(const FourVector& v, int sign);

// Bound |y| <= constant * |x| on the support of Theta_n times the past cone.
double inclusion_constant(int n);

// ---------------------------------------------------------------- scaled test families

// Momentum profile: normalized Gaussian of the given width in dim variables,
// times (1 + asymmetry * q_0). Integrates to one.
struct ScaledTestFamily {
    std::string name = "gauss";
    int dim = 1;
    double width = 1.0;
    double asymmetry = 0.0;
    std::vector<double> schedule;
};

std::vector<double> default_schedule();  // 12 points, 0.3 * 2^{-k/2}
ScaledTestFamily gaussian_family(int dim, double width = 1.0, double asymmetry = 0.0);

struct LimitSample {
    double eps = 0.0;
    std::complex<double> value;
};

struct LimitReport {
    std::complex<double> estimate;
    bool converged = false;
    double log_slope = 0.0;        // d value / d log(1/eps), real part
    double slope_sigma = 0.0;
    double confidence_width = 0.0; // 2 sigma plus a floor
    bool slope_significant = false;
    double tolerance = 1e-4;
    std::vector<LimitSample> samples;
    std::vector<LimitSample> second_samples;
    std::string diagnostics;
};

constexpr double kLimitTolerance = 1e-4;

// Evaluator receives the family and eps and returns <t, g_eps>.
using SmearedEvaluator = std::function<std::complex<double>(const ScaledTestFamily&, double)>;

LimitReport lojasiewicz_value(const SmearedEvaluator& eval, const ScaledTestFamily& family,
                              const ScaledTestFamily& second_family, double tolerance = kLimitTolerance);

// Integral of profile(q) t(eps q) over R^dim by tensor Gauss-Legendre (dim <= 4).
std::complex<double> smear(const std::function<std::complex<double>(const std::vector<double>&)>& t,
                           const ScaledTestFamily& family, double eps);

LimitReport lemma51_check(const std::function<double(const std::vector<double>&)>& t, const ScaledTestFamily& family,
                          const ScaledTestFamily& second_family);

// ---------------------------------------------------------------- second-order demonstrations

enum class SwitchProfile {
    flat,          // f-hat equal to one near zero, realized as exp(-s)
    vanishing_at_0 // f-hat(0) = 0, realized as s exp(-s)
};

struct AppendixCResult {
    LimitReport advanced;
    LimitReport retarded;
    LimitReport difference;   // advanced minus retarded
    double expected_slope = 0.0;  // 2 rho_D(0) / pi
};

struct AppendixCOptions {
    double c_mis = 0.0;
    SwitchProfile profile = SwitchProfile::flat;
    double asymmetry = 0.5;
    std::vector<double> schedule;  // default_schedule() when empty
};

AppendixCResult appendix_c_demo(const ModelSpec& model, const AppendixCOptions& opts);

struct GlVsEgOptions {
    int order = 2;               // 0 checks the vacuum-bubble identity
    int n_sub = -1;              // -1: central normalization
    double constant_shift = 0.0; // added to Sigma to model a missed normalization
    std::vector<double> schedule;
};

struct DecayReport {
    std::vector<double> eps;
    std::vector<std::complex<double>> difference;
    double exponent = 0.0;
    double exponent_sigma = 0.0;
    bool normalized = true;
    std::vector<std::string> warnings;
};

DecayReport gl_vs_eg_second_order(const ModelSpec& model, const GlVsEgOptions& opts);

}  // namespace egq
