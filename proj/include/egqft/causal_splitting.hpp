#pragma once

#include "egqft/propagators.hpp"

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace egq {

struct SpectralDensity {
    std::function<double(double)> rho;  // zero below threshold
    double threshold = 0.0;
    double growth_exponent = 0.0;       // rho(s) = O(s^growth) at large s
    std::string label;
};

// rho(s) = pairing_weight * two-body phase space; two pairings for :psi^2: against :psi^2:.
SpectralDensity bubble_density(double m1, double m2, double pairing_weight = 2.0);

enum class Prescription { feynman, advanced, retarded };
std::string to_string(Prescription p);

class SelfEnergy {
public:
    SelfEnergy(SpectralDensity density, int n_sub);

    const SpectralDensity& density() const { return density_; }
    int n_sub() const { return n_sub_; }
    SelfEnergy with_n_sub(int n) const { return SelfEnergy(density_, n); }

    // (1/pi) * integral rho(s) / s^{k+1} ds: the coefficient linking k and k+1 subtractions.
    double subtraction_constant(int k) const;

private:
    SpectralDensity density_;
    int n_sub_;
    struct Cache {
        std::mutex mutex;
        std::map<int, double> constants;
    };
    std::shared_ptr<Cache> cache_;
};

// Sigma / x^{n_sub}: keeps relative precision near x = 0.
std::complex<double> dispersion_reduced(const SelfEnergy& se, double q2, Prescription mode, double q0_sign = 1.0);
// (q2)^{n}/pi * integral rho(s) / (s^{n} (s - q2 -+ i0)) ds.
std::complex<double> dispersion_eval(const SelfEnergy& se, double q2, Prescription mode, double q0_sign = 1.0);

// Minimal n_sub with vanishing q-derivatives through order omega at 0.
int central_subtractions(int omega);
SelfEnergy central_normalize(const SelfEnergy& se, int omega);

struct FreedomBasis {
    int omega = 0;
    int n = 0;
    std::vector<std::vector<int>> multi_indices;  // length 4n each, graded-lex order
};
FreedomBasis freedom_basis(int omega, int n);

struct ScalingDegree {
    double value = 0.0;
    double fit_residual = 0.0;
    bool indeterminate = false;
    std::string diagnostics;
};

// probe(lambda) = <t, phi(./lambda)>; estimate = -slope of log|lambda^{-N} probe| vs log lambda.
ScalingDegree scaling_degree_estimate(const std::function<double(double)>& probe, int dim,
                                      const std::vector<double>& lambdas = {});

// Probes of delta and d/dx0 delta in R^dim against a shifted Gaussian.
std::function<double(double)> delta_probe(int dim);
std::function<double(double)> derivative_delta_probe(int dim);

}  // namespace egq
