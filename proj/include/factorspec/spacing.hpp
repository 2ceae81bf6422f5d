#pragma once

// Level-spacing statistics pipeline: k-index, ordered series, randomized
// almost-consecutive differences, windowed unfolding, surmise densities
// (GUE / GOE / Poisson), model fitting, and Gaussian-kernel density
// estimation.

#include "factorspec/ensemble.hpp"
#include "factorspec/rng.hpp"
#include "factorspec/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace fspec {

// k = (1/4)(E - 1) (ln 2^{n/2})^4; negative E-1 passes through signed
inline double k_index(double e, unsigned n_bits) {
    const double lh = std::log(std::exp2(n_bits / 2.0));
    const double l4 = lh * lh * lh * lh;
    return 0.25 * (e - 1.0) * l4;
}

struct KIndexSeries {
    std::vector<double> values;  // ascending
    unsigned n_bits = 0;
    std::size_t source_count = 0;
};

inline KIndexSeries build_series(const std::vector<EnergyRecord>& records, unsigned n_bits) {
    KIndexSeries series;
    series.n_bits = n_bits;
    series.source_count = records.size();
    series.values.reserve(records.size());
    for (const auto& rec : records) series.values.push_back(k_index(rec.e, n_bits));
    std::sort(series.values.begin(), series.values.end());
    return series;
}

inline KIndexSeries series_from_values(std::vector<double> k_values, unsigned n_bits) {
    KIndexSeries series;
    series.n_bits = n_bits;
    series.source_count = k_values.size();
    std::sort(k_values.begin(), k_values.end());
    series.values = std::move(k_values);
    return series;
}

// Delta k_i(l) = (k_{i+ceil(l/2)} - k_{i-ceil(l/2)}) / l
inline double local_difference(const KIndexSeries& series, std::size_t i, int ell) {
    if (ell < 1) throw ValidationError("local_difference needs ell >= 1");
    const std::size_t off = static_cast<std::size_t>((ell + 1) / 2);
    if (i < off || i + off >= series.values.size())
        throw ValidationError("local_difference: stencil outside series");
    return (series.values.at(i + off) - series.values.at(i - off)) / ell;
}

// <Delta k_i>_L = (k_{i+ceil(L/2)} - k_{i-ceil(L/2)}) / L
inline double window_mean(const KIndexSeries& series, std::size_t i, int window) {
    if (window < 1) throw ValidationError("window_mean needs L >= 1");
    const std::size_t off = static_cast<std::size_t>((window + 1) / 2);
    if (i < off || i + off >= series.values.size())
        throw ValidationError("window_mean: window outside series");
    return (series.values.at(i + off) - series.values.at(i - off)) / window;
}

// The printed stencil divides by ell although the difference spans
// 2 ceil(ell/2) gaps, which biases odd draws by (ell+1)/ell and the uniform
// mixture mean to ~1.256.  Unfolded spacings are mean-one by definition, so
// the default divides by the spanned gap count; the literal form is kept as
// an option.
enum class StencilMode { span_normalized, literal };

struct SpacingSample {
    std::vector<double> s;
    std::vector<int> ell;          // the width drawn for each kept index
    std::vector<std::size_t> idx;  // source index i of each spacing
    int window = 0;                // L
    int ell_min = 1, ell_max = 6;
    std::uint64_t seed = 0;
    StencilMode mode = StencilMode::span_normalized;
};

inline SpacingSample unfold(const KIndexSeries& series, int window, int ell_min, int ell_max,
                            std::uint64_t seed, StencilMode mode = StencilMode::span_normalized) {
    if (ell_min < 1 || ell_max < ell_min) throw ValidationError("unfold: bad ell range");
    if (window <= 2 * ell_max) throw ValidationError("unfold: window must exceed the ell stencil");
    const std::size_t margin = static_cast<std::size_t>((window + 1) / 2);
    if (series.values.size() <= 2 * margin) throw ValidationError("unfold: series too short for window");

    SpacingSample sample;
    sample.window = window;
    sample.ell_min = ell_min;
    sample.ell_max = ell_max;
    sample.seed = seed;
    sample.mode = mode;
    sample.s.reserve(series.values.size() - 2 * margin);
    for (std::size_t i = margin; i + margin < series.values.size(); ++i) {
        Rng rng(derive_seed(seed, i));
        const int ell = ell_min + static_cast<int>(rng.next_below(ell_max - ell_min + 1));
        const std::size_t off = static_cast<std::size_t>((ell + 1) / 2);
        const double span = series.values[i + off] - series.values[i - off];
        const double delta = span / (mode == StencilMode::literal ? ell : 2.0 * off);
        const double wm = (series.values[i + margin] - series.values[i - margin]) / window;
        if (!(wm > 0)) continue;  // degenerate window (>= L identical values)
        sample.s.push_back(delta / wm);
        sample.ell.push_back(ell);
        sample.idx.push_back(i);
    }
    return sample;
}

// ---------------------------------------------------------------------------
// Surmise densities

inline double gue_pdf(double s) {
    if (s < 0) throw ValidationError("surmise pdf needs s >= 0");
    return 32.0 / (M_PI * M_PI) * s * s * std::exp(-4.0 * s * s / M_PI);
}

inline double goe_pdf(double s) {
    if (s < 0) throw ValidationError("surmise pdf needs s >= 0");
    return 0.5 * M_PI * s * std::exp(-0.25 * M_PI * s * s);
}

inline double poisson_pdf(double s) {
    if (s < 0) throw ValidationError("surmise pdf needs s >= 0");
    return std::exp(-s);
}

inline double gue_cdf(double s) {
    if (s < 0) throw ValidationError("surmise cdf needs s >= 0");
    return std::erf(2.0 * s / std::sqrt(M_PI)) - 4.0 / M_PI * s * std::exp(-4.0 * s * s / M_PI);
}

inline double goe_cdf(double s) {
    if (s < 0) throw ValidationError("surmise cdf needs s >= 0");
    return 1.0 - std::exp(-0.25 * M_PI * s * s);
}

inline double poisson_cdf(double s) {
    if (s < 0) throw ValidationError("surmise cdf needs s >= 0");
    return 1.0 - std::exp(-s);
}

// ---------------------------------------------------------------------------
// Fitting

enum class SpacingModel { gue, goe, poisson };

inline const char* model_name(SpacingModel m) {
    switch (m) {
        case SpacingModel::gue: return "GUE";
        case SpacingModel::goe: return "GOE";
        default: return "Poisson";
    }
}

struct ModelFit {
    double log_likelihood = 0;
    double ks = 0;
    double chi2 = 0;
};

struct FitReport {
    ModelFit gue, goe, poisson;
    SpacingModel best_model = SpacingModel::poisson;
    std::vector<double> bin_edges;
    std::vector<std::uint64_t> bin_counts;
};

namespace detail {

template <class Pdf, class Cdf>
inline ModelFit fit_one_model(const std::vector<double>& sorted, Pdf pdf, Cdf cdf,
                              const std::vector<double>& edges,
                              const std::vector<std::uint64_t>& counts) {
    ModelFit fit;
    const std::size_t n = sorted.size();
    for (double s : sorted) fit.log_likelihood += std::log(std::max(pdf(s), 1e-300));
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double F = cdf(sorted[i]);
        d = std::max(d, std::fabs(F - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(F - static_cast<double>(i + 1) / n));
    }
    fit.ks = d;
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        const double expected = n * (cdf(edges[b + 1]) - cdf(edges[b]));
        const double diff = static_cast<double>(counts[b]) - expected;
        fit.chi2 += diff * diff / std::max(expected, 1e-9);
    }
    return fit;
}

}  // namespace detail

// Log-likelihood under the exact densities, KS against the closed-form CDFs,
// chi-squared on equal bins over [hist_lo, hist_hi] (reference only).
inline FitReport fit_spacings(const SpacingSample& sample, int bins = 80, double hist_lo = 0,
                              double hist_hi = 4) {
    if (sample.s.empty()) throw ValidationError("fit_spacings: empty sample");
    if (bins < 1 || !(hist_hi > hist_lo)) throw ValidationError("fit_spacings: bad histogram spec");
    std::vector<double> sorted = sample.s;
    std::sort(sorted.begin(), sorted.end());

    FitReport report;
    report.bin_edges.resize(bins + 1);
    report.bin_counts.assign(bins, 0);
    for (int b = 0; b <= bins; ++b)
        report.bin_edges[b] = hist_lo + (hist_hi - hist_lo) * b / bins;
    for (double s : sorted) {
        if (s < hist_lo || s >= hist_hi) continue;
        const int b = std::min(bins - 1, static_cast<int>((s - hist_lo) / (hist_hi - hist_lo) * bins));
        ++report.bin_counts[b];
    }

    report.gue = detail::fit_one_model(sorted, gue_pdf, gue_cdf, report.bin_edges, report.bin_counts);
    report.goe = detail::fit_one_model(sorted, goe_pdf, goe_cdf, report.bin_edges, report.bin_counts);
    report.poisson =
        detail::fit_one_model(sorted, poisson_pdf, poisson_cdf, report.bin_edges, report.bin_counts);

    // argmax log-likelihood, ties resolved toward Poisson
    report.best_model = SpacingModel::poisson;
    double best = report.poisson.log_likelihood;
    if (report.goe.log_likelihood > best) {
        best = report.goe.log_likelihood;
        report.best_model = SpacingModel::goe;
    }
    if (report.gue.log_likelihood > best) {
        best = report.gue.log_likelihood;
        report.best_model = SpacingModel::gue;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Kernel density estimation

struct KdeCurve {
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth = 0;
};

// Silverman's rule on the sample (0 requests it explicitly)
inline double silverman_bandwidth(const std::vector<double>& values) {
    if (values.size() < 2) throw ValidationError("silverman bandwidth needs >= 2 points");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double mu = mean(sorted);
    double var = 0;
    for (double v : sorted) var += (v - mu) * (v - mu);
    const double sd = std::sqrt(var / sorted.size());
    const double iqr = sorted[static_cast<std::size_t>(0.75 * sorted.size())]
        - sorted[static_cast<std::size_t>(0.25 * sorted.size())];
    const double scale = (iqr > 0) ? std::min(sd, iqr / 1.34) : sd;
    if (!(scale > 0)) throw ValidationError("silverman bandwidth: degenerate sample");
    return 0.9 * scale * std::pow(static_cast<double>(sorted.size()), -0.2);
}

// Gaussian-kernel density on a 512-point grid spanning the data range padded
// by 3 bandwidths.
inline KdeCurve kde(const std::vector<double>& values, double bandwidth = 0) {
    if (values.empty()) throw ValidationError("kde: empty sample");
    const double bw = bandwidth > 0 ? bandwidth : silverman_bandwidth(values);
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    KdeCurve curve;
    curve.bandwidth = bw;
    const std::size_t points = 512;
    const double lo = sorted.front() - 3 * bw, hi = sorted.back() + 3 * bw;
    curve.grid.resize(points);
    curve.density.resize(points);
    const double inv_norm = 1.0 / (sorted.size() * bw * std::sqrt(2.0 * M_PI));
    for (std::size_t i = 0; i < points; ++i) {
        const double g = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        curve.grid[i] = g;
        auto first = std::lower_bound(sorted.begin(), sorted.end(), g - 8 * bw);
        auto last = std::upper_bound(sorted.begin(), sorted.end(), g + 8 * bw);
        double acc = 0;
        for (auto it = first; it != last; ++it) {
            const double t = (g - *it) / bw;
            acc += std::exp(-0.5 * t * t);
        }
        curve.density[i] = acc * inv_norm;
    }
    return curve;
}

}  // namespace fspec
