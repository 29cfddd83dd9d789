#include "egqft/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace egq {

unsigned worker_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EGQFT_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_threads(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("least_squares: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("least_squares needs at least two points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("least_squares: abscissae coincide");
    LinearFit f;
    f.points = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - f.intercept - f.slope * x[i];
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / static_cast<double>(n));
    f.slope_sigma = n > 2 ? std::sqrt(ss / static_cast<double>(n - 2) / sxx) : 0.0;
    return f;
}

std::vector<double> simpson_weights(std::size_t points, double step) {
    if (points < 3 || points % 2 == 0) throw std::invalid_argument("Simpson rule needs an odd number of points >= 3");
    std::vector<double> w(points);
    for (std::size_t i = 0; i < points; ++i) w[i] = (i == 0 || i + 1 == points) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    for (auto& v : w) v *= step / 3.0;
    return w;
}

SequenceLimit extrapolate_limit(const std::vector<double>& v, double rel_tol, double abs_floor) {
    SequenceLimit out;
    const std::size_t n = v.size();
    if (n < 4) throw std::invalid_argument("extrapolate_limit needs at least four values");
    // Aitken delta-squared on the last three windows
    auto aitken = [&](std::size_t k) {  // uses v[k-2], v[k-1], v[k]
        const double d1 = v[k - 1] - v[k - 2], d2 = v[k] - v[k - 1];
        const double den = d2 - d1;
        if (den == 0 || !std::isfinite(den)) return v[k];
        return v[k] - d2 * d2 / den;
    };
    const double d_last = v[n - 1] - v[n - 2], d_prev = v[n - 2] - v[n - 3];
    const double scale = std::max(std::abs(v[n - 1]), abs_floor);
    out.ratio = d_prev != 0 ? d_last / d_prev : 0.0;
    const double e1 = aitken(n - 1), e0 = aitken(n - 2);
    out.change = std::abs(e1 - e0);
    const bool tiny = std::abs(d_last) <= rel_tol * scale * 1e-3 && std::abs(d_prev) <= rel_tol * scale * 1e-3;
    if (tiny) {
        out.estimate = v[n - 1];
        out.converged = true;
        return out;
    }
    out.estimate = e1;
    out.converged = out.ratio >= 0 && out.ratio < 0.95 &&
                    out.change <= rel_tol * std::max(std::abs(e1), abs_floor);
    return out;
}

}  // namespace egq
