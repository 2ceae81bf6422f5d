#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fspec {

// Input that fails validation (bad file, bad parameter combination).
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Work that would exceed a configured resource budget.
class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Index-parallel map.  Each item must depend only on its index (derived
// seeds, preallocated slots), so results are identical for any thread count.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw ValidationError("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw ValidationError("mean of empty set");
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// least-squares slope of y against x
inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("regression needs >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// log-spaced grid on [lo, hi], endpoints included
inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0) || !(hi > lo) || points < 2) throw ValidationError("bad log grid");
    std::vector<double> g(points);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(points - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace fspec
