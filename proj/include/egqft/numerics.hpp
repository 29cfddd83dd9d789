#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace egq {

// Worker count: hardware concurrency capped by EGQFT_THREADS when set.
unsigned worker_threads();

// Runs body(i) for i in [0, n); iterations must be independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_sigma = 0.0;   // standard error of the slope
    double residual_rms = 0.0;
    std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x. Needs at least two distinct x.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// Composite Simpson weights on a uniform grid with an even number of intervals.
std::vector<double> simpson_weights(std::size_t points, double step);

// Richardson/Aitken acceleration of the tail of a sequence.
struct SequenceLimit {
    double estimate = 0.0;
    double ratio = 1.0;        // contraction ratio of successive differences
    double change = 0.0;       // difference between the last two extrapolated values
    bool converged = false;
};
SequenceLimit extrapolate_limit(const std::vector<double>& values, double rel_tol, double abs_floor);

}  // namespace egq
