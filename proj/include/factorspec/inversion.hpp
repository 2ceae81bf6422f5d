#pragma once

// Spectrum-inversion factoring experiment.  For a target level E* the
// constraint (E* - E_T(x, N/x))^2 is minimized over candidate factors x in
// [2, sqrt(N)]: a log-uniform grid maps the residual, the below-median
// region is refined (densely for exact counting, golden-section for the
// smooth varsigma route), and each surviving point seeds an exact
// divisibility window of half-width min(ceil(2 N^{1/6}), window_cap).
//
// E_T is a function of the integer candidate: evaluation snaps x to floor(x)
// (pi is a step function; factors are integers).  With use_exact_pi a single
// combinatorial pass at N caches pi(v) for v <= sqrt(N) and pi(floor(N/i))
// for every integer i <= sqrt(N), which is exactly the set of values the
// search needs; without it, pi is replaced by varsigma_T(x) R(x).

#include "factorspec/bigint.hpp"
#include "factorspec/primes.hpp"
#include "factorspec/riemann.hpp"
#include "factorspec/spectrum.hpp"
#include "factorspec/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace fspec {

struct InversionConfig {
    std::size_t T = 1000;  // zero truncation for the varsigma route
    std::size_t grid_points = 512;
    std::vector<double> levels;  // explicit targets; else spectrum lines by weight
    std::uint64_t window_cap = 1u << 16;
    bool use_exact_pi = false;
    // near-degenerate minima are all forwarded; the merged-bracket refinement
    // deduplicates the work, so a generous cap costs little
    std::size_t max_candidates = 256;
};

struct CandidateFactor {
    double x0 = 0;        // grid minimum
    double residual = 0;  // squared constraint value at x0
    std::optional<Wide> refined;
    std::uint64_t steps = 0;  // refinement evaluations + divisibility tests
};

struct InvertReport {
    Wide n;
    unsigned n_bits = 0;
    bool success = false;
    Wide x, y;
    std::uint64_t steps = 0;
    std::size_t levels_tried = 0;
    double gamma_ratio = 0;  // steps / ((log2 N)^3 log2 log2 N)
};

// ---------------------------------------------------------------------------

// E_T evaluated at integer candidates of one modulus.
class EnergyTEvaluator {
  public:
    EnergyTEvaluator(const Wide& n, const InversionConfig& cfg, const ZetaZeroTable* zeros)
        : n_(n), exact_(cfg.use_exact_pi), zeros_(zeros), t_(cfg.T) {
        if (n_ < 4) throw ValidationError("energy_T needs N >= 4");
        root_wide_ = isqrt(n_);
        n_double_ = to_double(n_);
        if (exact_) {
            if (n_ > Wide(0xFFFFFFFFFFFFFFFFull))
                throw BudgetError("exact-pi inversion limited to 64-bit moduli");
            cache_.emplace(low_u64(n_));  // one pass serves every candidate
            const std::uint64_t j = cache_->pi_small(low_u64(root_wide_));
            denom_ = static_cast<double>(j) * static_cast<double>(j);
        } else {
            if (!zeros_) throw ValidationError("varsigma inversion needs a zero table");
            if (t_ > zeros_->count()) throw ValidationError("inversion: T exceeds zero table");
            const double pj = pi_approx(std::sqrt(n_double_), *zeros_, t_);
            denom_ = pj * pj;
        }
    }

    double root() const { return to_double(root_wide_); }
    const Wide& modulus() const { return n_; }

    // E_T at floor(x)
    double operator()(double x) const {
        std::uint64_t xi = static_cast<std::uint64_t>(x);
        if (xi < 2) xi = 2;
        if (Wide(xi) > root_wide_) xi = low_u64(root_wide_);
        if (exact_) {
            const double px = static_cast<double>(cache_->pi_small(xi));
            const double py = static_cast<double>(cache_->pi_quotient(xi));
            return px * py / denom_;
        }
        const double px = pi_approx(static_cast<double>(xi), *zeros_, t_);
        const double py = pi_approx(n_double_ / static_cast<double>(xi), *zeros_, t_);
        return px * py / denom_;
    }

  private:
    Wide n_;
    bool exact_;
    const ZetaZeroTable* zeros_;
    std::size_t t_;
    Wide root_wide_;
    double n_double_ = 0;
    double denom_ = 1;
    std::optional<QuotientPiCache> cache_;
};

// Standalone single-candidate E_T.  Exact mode counts through the
// PrimeCounter, which suits small moduli; batch searches use the evaluator.
inline double energy_T(double x, const Wide& n, const InversionConfig& cfg,
                       const PrimeCounter& counter, const ZetaZeroTable* zeros = nullptr) {
    if (!(x >= 2)) throw ValidationError("energy_T needs x >= 2");
    const Wide root = isqrt(n);
    if (Wide(static_cast<std::uint64_t>(x)) > root) throw ValidationError("energy_T needs x <= sqrt(N)");
    const std::uint64_t xi = static_cast<std::uint64_t>(x);
    if (cfg.use_exact_pi) {
        const double px = static_cast<double>(counter.pi_u64(xi));
        const double py = static_cast<double>(counter.pi_wide(n / xi));
        const double j = static_cast<double>(counter.pi_wide(root));
        return px * py / (j * j);
    }
    if (!zeros) throw ValidationError("energy_T varsigma route needs a zero table");
    const double nd = to_double(n);
    const double px = pi_approx(static_cast<double>(xi), *zeros, cfg.T);
    const double py = pi_approx(nd / static_cast<double>(xi), *zeros, cfg.T);
    const double pj = pi_approx(std::sqrt(nd), *zeros, cfg.T);
    return px * py / (pj * pj);
}

namespace detail {

struct CandidateSpan {
    CandidateFactor candidate;
    std::uint64_t lo = 0, hi = 0;  // refinement bracket (inclusive)
};

struct ConstraintScan {
    std::vector<std::uint64_t> nodes;
    std::vector<double> residual;
    double median_residual = 0;
    std::vector<CandidateSpan> spans;
    std::uint64_t grid_evals = 0;
};

// disjoint refinement range with the best residual seen on its grid nodes
struct MergedRange {
    std::uint64_t lo = 0, hi = 0;
    double best = 1e308;
};

inline ConstraintScan scan_constraint(const EnergyTEvaluator& energy, double level,
                                      const InversionConfig& cfg) {
    // levels below 1 are legal: finite-size energies fluctuate under E = 1
    if (!(level > 0)) throw ValidationError("solve_constraint needs a positive level");
    if (cfg.grid_points < 10) throw ValidationError("solve_constraint needs grid_points >= 10");
    const double root = energy.root();

    // log-uniform nodes snapped to distinct integers
    std::vector<std::uint64_t> nodes;
    nodes.reserve(cfg.grid_points);
    for (double g : log_grid(2.0, std::max(2.0, root), cfg.grid_points)) {
        const std::uint64_t v = static_cast<std::uint64_t>(g);
        if (nodes.empty() || v > nodes.back()) nodes.push_back(v);
    }

    ConstraintScan scan;
    scan.nodes = std::move(nodes);
    scan.residual.resize(scan.nodes.size());
    for (std::size_t i = 0; i < scan.nodes.size(); ++i) {
        const double diff = level - energy(static_cast<double>(scan.nodes[i]));
        scan.residual[i] = diff * diff;
        ++scan.grid_evals;
    }
    std::vector<double> sorted = scan.residual;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    scan.median_residual = sorted[sorted.size() / 2];

    for (std::size_t i = 0; i < scan.nodes.size(); ++i) {
        const bool left_ok = (i == 0) || scan.residual[i] <= scan.residual[i - 1];
        const bool right_ok = (i + 1 == scan.nodes.size()) || scan.residual[i] <= scan.residual[i + 1];
        if (!(left_ok && right_ok) || !(scan.residual[i] < scan.median_residual)) continue;
        // merge plateau runs: keep the first node of an equal-residual run
        if (i > 0 && scan.residual[i] == scan.residual[i - 1]) continue;
        CandidateSpan span;
        span.candidate.x0 = static_cast<double>(scan.nodes[i]);
        span.candidate.residual = scan.residual[i];
        span.lo = (i == 0) ? scan.nodes[0] : scan.nodes[i - 1];
        span.hi = (i + 1 == scan.nodes.size()) ? scan.nodes.back() : scan.nodes[i + 1];
        scan.spans.push_back(span);
    }
    std::stable_sort(scan.spans.begin(), scan.spans.end(),
                     [](const CandidateSpan& a, const CandidateSpan& b) {
                         return a.candidate.residual < b.candidate.residual;
                     });
    if (scan.spans.size() > cfg.max_candidates) scan.spans.resize(cfg.max_candidates);
    return scan;
}

// Coverage ranges for the exact route: the cells around every below-median
// node, merged.  Prime-count fluctuations make node residuals an unreliable
// ranking near the factor (the plateau is a needle in a noisy walk), so the
// whole below-median region is swept; merging keeps every integer visited at
// most once per level.
inline std::vector<MergedRange> coverage_ranges(const ConstraintScan& scan) {
    std::vector<MergedRange> ranges;
    const std::size_t n = scan.nodes.size();
    for (std::size_t i = 0; i < n;) {
        if (!(scan.residual[i] < scan.median_residual)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        double best = scan.residual[i];
        while (j + 1 < n && scan.residual[j + 1] < scan.median_residual) {
            ++j;
            best = std::min(best, scan.residual[j]);
        }
        MergedRange r;
        r.lo = scan.nodes[i == 0 ? 0 : i - 1];
        r.hi = scan.nodes[j + 1 == n ? j : j + 1];
        r.best = best;
        ranges.push_back(r);
        i = j + 1;
    }
    std::stable_sort(ranges.begin(), ranges.end(), [](const MergedRange& a, const MergedRange& b) {
        return a.best != b.best ? a.best < b.best : a.lo < b.lo;
    });
    return ranges;
}

// Dense integer scan of one range.  Returns the start of every exact-zero
// plateau (the residual vanishes bit-exactly on the factor plateau, and only
// there or on exact pi-product degeneracies); if no exact zero exists, the
// argmin stands in.  Ties resolve to the smaller x.
inline std::vector<std::uint64_t> refine_range(const EnergyTEvaluator& energy, double level,
                                               std::uint64_t lo, std::uint64_t hi,
                                               std::size_t zero_cap, std::uint64_t& steps) {
    std::vector<std::uint64_t> zeros;
    std::uint64_t best_x = lo;
    double best_r = 1e308;
    double prev_r = 1e308;
    for (std::uint64_t v = lo; v <= hi; ++v) {
        const double diff = level - energy(static_cast<double>(v));
        const double r = diff * diff;
        ++steps;
        if (r == 0.0 && prev_r != 0.0 && zeros.size() < zero_cap) zeros.push_back(v);
        if (r < best_r) {
            best_r = r;
            best_x = v;
        }
        prev_r = r;
    }
    if (zeros.empty()) zeros.push_back(best_x);
    return zeros;
}

// cheap local polish for the varsigma route (the landscape is smooth there):
// golden-section on the bracket, then the window does the exact work
inline std::uint64_t polish_smooth(const EnergyTEvaluator& energy, double level, double lo,
                                   double hi, std::uint64_t& steps) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    auto resid = [&](double x) {
        const double diff = level - energy(x);
        ++steps;
        return diff * diff;
    };
    double f1 = resid(x1), f2 = resid(x2);
    for (int it = 0; it < 28 && b - a > 2.0; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = resid(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = resid(x2);
        }
    }
    return static_cast<std::uint64_t>(0.5 * (a + b));
}

}  // namespace detail

// Grid minima of the squared constraint, below the grid-median residual,
// sorted ascending by residual.
inline std::vector<CandidateFactor> solve_constraint(const Wide& n, double level,
                                                     const InversionConfig& cfg,
                                                     const ZetaZeroTable* zeros = nullptr) {
    const EnergyTEvaluator energy(n, cfg, zeros);
    auto scan = detail::scan_constraint(energy, level, cfg);
    std::vector<CandidateFactor> out;
    out.reserve(scan.spans.size());
    for (auto& span : scan.spans) out.push_back(span.candidate);
    return out;
}

// Divisibility window around ceil(x0): half-width min(ceil(2 N^{1/6}),
// window_cap), odd candidates (plus 2), nearest first.  x0 normally sits in
// [2, sqrt(N)] but any interior point is scannable.
inline std::optional<Wide> refine_window(const Wide& n, double x0, const InversionConfig& cfg,
                                         std::uint64_t& steps) {
    if (!(x0 >= 2)) throw ValidationError("refine_window needs x0 >= 2");
    if (Wide(static_cast<std::uint64_t>(x0)) >= n) throw ValidationError("refine_window needs x0 < N");
    const std::uint64_t w = std::min<std::uint64_t>(
        static_cast<std::uint64_t>(std::ceil(2.0 * std::pow(to_double(n), 1.0 / 6.0))),
        cfg.window_cap ? cfg.window_cap : 1);
    const std::int64_t center = static_cast<std::int64_t>(std::ceil(x0));

    auto divides = [&](std::int64_t c) -> bool {
        if (c < 2) return false;
        if (c % 2 == 0 && c != 2) return false;
        return n % Wide(c) == 0;
    };
    for (std::uint64_t d = 0; d <= w; ++d) {
        for (const std::int64_t c : {center - static_cast<std::int64_t>(d),
                                     center + static_cast<std::int64_t>(d)}) {
            if (c < 2 || (c % 2 == 0 && c != 2)) continue;
            ++steps;
            if (divides(c)) return Wide(c);
            if (d == 0) break;  // center tested once
        }
    }
    return std::nullopt;
}

// Full pipeline: levels in descending spectral weight (or cfg.levels as
// given), grid scan, bracket refinement, divisibility window; first verified
// prime factorization wins.
inline std::pair<std::optional<std::pair<Wide, Wide>>, InvertReport> invert_spectrum(
    const Wide& n, const SimulatorSpectrum& spectrum, const InversionConfig& cfg,
    const ZetaZeroTable* zeros = nullptr) {
    InvertReport report;
    report.n = n;
    report.n_bits = bit_length(n);
    if (n < 4) {
        report.gamma_ratio = 0;
        return {std::nullopt, report};
    }

    std::vector<double> levels = cfg.levels;
    if (levels.empty()) {
        std::vector<SpectrumLine> lines = spectrum.lines;
        std::stable_sort(lines.begin(), lines.end(),
                         [](const SpectrumLine& a, const SpectrumLine& b) { return a.weight > b.weight; });
        levels.reserve(lines.size());
        for (const auto& line : lines) levels.push_back(line.e);
    }

    const EnergyTEvaluator energy(n, cfg, zeros);
    auto try_window = [&](double x0, std::uint64_t& steps) -> std::optional<std::pair<Wide, Wide>> {
        auto divisor = refine_window(n, x0, cfg, steps);
        if (!divisor) return std::nullopt;
        Wide x = *divisor, y = n / *divisor;
        if (x > y) std::swap(x, y);
        if (x * y == n && is_prime(x) && is_prime(y)) return std::make_pair(x, y);
        return std::nullopt;
    };

    std::optional<std::pair<Wide, Wide>> result;
    for (double level : levels) {
        ++report.levels_tried;
        const double target = level;
        auto scan = detail::scan_constraint(energy, target, cfg);
        report.steps += scan.grid_evals;
        if (cfg.use_exact_pi) {
            // the exact landscape is a noisy step function whose only
            // reliable markers are bit-exact zero plateaus: sweep the
            // below-median coverage densely and window every plateau
            for (const auto& range : detail::coverage_ranges(scan)) {
                std::uint64_t steps = 0;
                const auto marks = detail::refine_range(energy, target, range.lo, range.hi, 64, steps);
                for (std::uint64_t mark : marks) {
                    if ((result = try_window(static_cast<double>(mark), steps))) break;
                }
                report.steps += steps;
                if (result) break;
            }
        } else {
            for (const auto& span : scan.spans) {
                std::uint64_t steps = 0;
                const std::uint64_t x1 =
                    detail::polish_smooth(energy, target, span.lo, span.hi, steps);
                result = try_window(static_cast<double>(x1), steps);
                report.steps += steps;
                if (result) break;
            }
        }
        if (result) {
            report.success = true;
            report.x = result->first;
            report.y = result->second;
            break;
        }
    }
    const double lg = std::log2(to_double(n));
    report.gamma_ratio = static_cast<double>(report.steps) / (lg * lg * lg * std::log2(lg));
    return {result, report};
}

}  // namespace fspec
