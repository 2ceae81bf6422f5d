#pragma once

// Semiclassical line spectrum of the simulator: quantisation condition,
// per-mode gauge, closed-form levels E(k,l), k^{-1/2} amplitude weights, the
// asymptotic energy density, and the bit-size scaling map
//   E -> 1 + (n_src/n_tgt)^4 (E - 1).
//
// Convention: h = 2^{n/2}, which makes the spectrum a pure function of the
// bit count and the scaling map exact.

#include "factorspec/ensemble.hpp"
#include "factorspec/util.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace fspec {

struct SpectrumLine {
    int k = 0;
    int l = 0;
    double e = 1;       // level energy, >= 1
    double weight = 0;  // normalized |a_kl|^2
    double g = 1;       // gauge of mode l
    double phase = 0;   // chi_l, carried but unused
};

struct SimulatorSpectrum {
    unsigned n_bits = 0;
    double h = 0;   // 2^{n/2}
    double q0 = 0;  // h^{1/3} / ln h
    std::vector<SpectrumLine> lines;
};

inline double spectrum_h(unsigned n_bits) { return std::exp2(n_bits / 2.0); }

// g(l) = 1 + (1 - 2 pi l / Q0^2) / ln[(ln h^2 / 2)^2]; the denominator
// parses as 2 ln ln h (ln h^2 / 2 = ln h).
inline double gauge_of_mode(int l, double h) {
    if (!(h > std::exp(1.0))) throw ValidationError("gauge_of_mode needs h > e");
    const double lh = std::log(h);
    const double q0 = std::pow(h, 1.0 / 3.0) / lh;
    return 1.0 + (1.0 - 2.0 * M_PI * l / (q0 * q0)) / (2.0 * std::log(lh));
}

namespace detail {

// boundary-condition residual: f(E) = 2 pi l - E ln(sqrt(E)/q_g) - q_g^2 + E.
// f is increasing in E on [1, q_g^2], and f(q_g^2) = 2 pi l, so a root
// exists iff f(1) <= 0.
inline double quantisation_residual(double two_pi_l, double e, double q_g) {
    return two_pi_l - e * std::log(std::sqrt(e) / q_g) - q_g * q_g + e;
}

// root of the residual for a continuous phase 2*pi*l
inline std::optional<double> solve_quantisation_phase(double two_pi_l, double q_g) {
    if (!(q_g > 1)) throw ValidationError("solve_quantisation needs q_g > 1");
    double lo = 1.0, hi = q_g * q_g;
    double flo = quantisation_residual(two_pi_l, lo, q_g);
    double fhi = quantisation_residual(two_pi_l, hi, q_g);
    if (flo > 0 || fhi < 0) return std::nullopt;  // no level for this mode
    const double tol = 1e-12 * q_g * q_g;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = quantisation_residual(two_pi_l, mid, q_g);
        if (std::fabs(fm) < tol) return mid;
        if (fm < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

inline std::optional<double> solve_quantisation(int l, double q_g) {
    return detail::solve_quantisation_phase(2.0 * M_PI * l, q_g);
}

// closed form E(k,l) = 1 + 4k / (3 (ln h)^{3 g(l)} ln q_g(k)), with q_g(k)
// evaluated at g = g(l)
inline double energy_level(int k, int l, double h) {
    if (k < 0) throw ValidationError("energy_level needs k >= 0");
    if (k == 0) return 1.0;
    const double g = gauge_of_mode(l, h);
    const double qg = q_gauge(k, g, h);
    if (!(qg > 1)) throw ValidationError("energy_level: q_g(k) not above 1");
    return 1.0 + 4.0 * k / (3.0 * std::pow(std::log(h), 3.0 * g) * std::log(qg));
}

// w_k = k^{-1/2} / sum, k = 1..k_max (k = 0 is singular and excluded)
inline std::vector<double> amplitude_weights(int k_max) {
    if (k_max < 1) throw ValidationError("amplitude_weights needs k_max >= 1");
    std::vector<double> w(k_max);
    double norm = 0;
    for (int k = 1; k <= k_max; ++k) norm += 1.0 / std::sqrt(static_cast<double>(k));
    for (int k = 1; k <= k_max; ++k) w[k - 1] = 1.0 / (std::sqrt(static_cast<double>(k)) * norm);
    return w;
}

// P_E ~ (1/2) (ln h)^2 / sqrt(E - 1), unnormalized
inline double p_energy_density(double e, double h) {
    if (!(e > 1)) {
        if (e - 1 > -1e-300) return std::numeric_limits<double>::infinity();
        throw ValidationError("p_energy_density needs E > 1");
    }
    if (e - 1 < 1e-300) return std::numeric_limits<double>::infinity();
    const double lh = std::log(h);
    return 0.5 * lh * lh / std::sqrt(e - 1);
}

// Line list: k in [1, k_max] crossed with the l range keeping g(l) in
// [0.5, 1.5]; the near-1 level survives through k = 1 carrying the largest
// weight.  Weights k^{-1/2}, normalized over the whole list.  The gauge band
// holds ~h^{2/3} modes at large sizes, so the list keeps at most l_cap modes
// centered on the resonant l0 = Q0^2/2pi.
inline SimulatorSpectrum build_spectrum(unsigned n_bits, int k_max = 200, int l_cap = 512) {
    if (k_max < 1) throw ValidationError("build_spectrum needs k_max >= 1");
    if (l_cap < 1) throw ValidationError("build_spectrum needs l_cap >= 1");
    SimulatorSpectrum spec;
    spec.n_bits = n_bits;
    spec.h = spectrum_h(n_bits);
    if (!(spec.h > std::exp(1.0))) throw ValidationError("build_spectrum: n_bits too small");
    const double lh = std::log(spec.h);
    spec.q0 = std::pow(spec.h, 1.0 / 3.0) / lh;
    const double q0sq = spec.q0 * spec.q0;
    const double band = std::log(lh);  // |g - 1| <= 0.5 <=> |1 - 2 pi l/Q0^2| <= band
    int l_lo = static_cast<int>(std::ceil(q0sq * (1.0 - band) / (2.0 * M_PI)));
    int l_hi = static_cast<int>(std::floor(q0sq * (1.0 + band) / (2.0 * M_PI)));
    if (l_lo > l_hi) throw ValidationError("build_spectrum: no mode satisfies the gauge band");
    if (l_hi - l_lo + 1 > l_cap) {
        const int center = static_cast<int>(std::lround(q0sq / (2.0 * M_PI)));
        l_lo = std::max(l_lo, center - l_cap / 2);
        l_hi = std::min(l_hi, l_lo + l_cap - 1);
    }

    double norm = 0;
    for (int l = l_lo; l <= l_hi; ++l) {
        const double g = gauge_of_mode(l, spec.h);
        if (!(q_gauge(1, g, spec.h) > 1.0)) continue;  // mode carries no level
        for (int k = 1; k <= k_max; ++k) {
            SpectrumLine line;
            line.k = k;
            line.l = l;
            line.g = g;
            line.e = energy_level(k, l, spec.h);
            line.weight = 1.0 / std::sqrt(static_cast<double>(k));
            norm += line.weight;
            spec.lines.push_back(line);
        }
    }
    if (spec.lines.empty()) throw ValidationError("build_spectrum: no mode carries a level at this size");
    for (auto& line : spec.lines) line.weight /= norm;
    return spec;
}

// Eq-24 scaling: exact, invertible, a group action over bit sizes.
inline SimulatorSpectrum scale_spectrum(const SimulatorSpectrum& src, unsigned n_target) {
    if (n_target == 0) throw ValidationError("scale_spectrum needs n_target >= 1");
    SimulatorSpectrum out = src;
    const double ratio = static_cast<double>(src.n_bits) / static_cast<double>(n_target);
    const double factor = ratio * ratio * ratio * ratio;
    out.n_bits = n_target;
    out.h = spectrum_h(n_target);
    out.q0 = std::pow(out.h, 1.0 / 3.0) / std::log(out.h);
    for (auto& line : out.lines) line.e = 1.0 + factor * (line.e - 1.0);
    return out;
}

}  // namespace fspec
