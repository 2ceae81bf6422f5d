#pragma once

// Factorisation ensembles and the arithmetic energy function.
//
// F(j) is the set of prime pairs (x, y) whose product N has pi(isqrt(N)) = j;
// the extended ensemble F(n) collects semiprimes of n bits with balanced
// factors.  The energy E = pi(x) pi(y) / j^2 and the canonical pair
//   p = (pi(y) - pi(x)) / 2j,   q = (pi(x) + pi(y)) / 2j
// satisfy q^2 - p^2 = E exactly as rationals; both exact integers and the
// real projections are kept on each record.

#include "factorspec/bigint.hpp"
#include "factorspec/primes.hpp"
#include "factorspec/rng.hpp"
#include "factorspec/util.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace fspec {

struct Semiprime {
    Wide n;
    Wide x, y;  // prime, x <= y
    unsigned n_bits = 0;
};

struct EnergyRecord {
    Semiprime sp;
    std::uint64_t j = 0;     // pi(isqrt(N))
    std::uint64_t pi_x = 0;  // exact counts; E, p, q are derived rationals
    std::uint64_t pi_y = 0;
    double e = 0;  // pi_x pi_y / j^2
    double p = 0;  // (pi_y - pi_x) / 2j
    double q = 0;  // (pi_x + pi_y) / 2j
    double h = 0;  // sqrt(N)

    Wide e_num() const { return Wide(pi_x) * pi_y; }
    Wide e_den() const { return Wide(j) * j; }
};

// j = pi(isqrt(N)); pi is a step function, so the floor loses nothing.
inline std::uint64_t ensemble_index(const Wide& n, const PrimeCounter& counter) {
    if (n < 4) throw ValidationError("ensemble_index needs N >= 4");
    return counter.pi_wide(isqrt(n));
}

inline EnergyRecord make_energy_record(const Wide& x, const Wide& y, const PrimeCounter& counter) {
    if (x > y) throw ValidationError("energy: x must not exceed y");
    if (!is_prime(x) || !is_prime(y)) throw ValidationError("energy: factors must be prime");
    EnergyRecord rec;
    rec.sp.x = x;
    rec.sp.y = y;
    rec.sp.n = x * y;
    rec.sp.n_bits = bit_length(rec.sp.n);
    rec.j = ensemble_index(rec.sp.n, counter);
    rec.pi_x = counter.pi_wide(x);
    rec.pi_y = counter.pi_wide(y);
    const double dj = static_cast<double>(rec.j);
    rec.e = static_cast<double>(rec.pi_x) * static_cast<double>(rec.pi_y) / (dj * dj);
    rec.p = (static_cast<double>(rec.pi_y) - static_cast<double>(rec.pi_x)) / (2.0 * dj);
    rec.q = (static_cast<double>(rec.pi_x) + static_cast<double>(rec.pi_y)) / (2.0 * dj);
    rec.h = std::sqrt(to_double(rec.sp.n));
    return rec;
}

inline double energy(const Wide& x, const Wide& y, const PrimeCounter& counter) {
    return make_energy_record(x, y, counter).e;
}

// E ~ 1 + (ln(x/h)/ln h)^2 by the prime number theorem
inline double asymptotic_energy(double x, double h) {
    if (!(x >= 2) || !(x <= h)) throw ValidationError("asymptotic_energy needs 2 <= x <= h");
    const double r = std::log(x / h) / std::log(h);
    return 1.0 + r * r;
}

inline std::pair<double, double> canonical_pq(const Wide& x, const Wide& y, const PrimeCounter& counter) {
    const EnergyRecord rec = make_energy_record(x, y, counter);
    return {rec.p, rec.q};
}

inline double hamiltonian(double p, double q) { return p * p - q * q; }

// Point on the hyperbola q^2 - p^2 = E.  The exponential halves are exposed
// because q^2 - p^2 computed from the rounded (q, p) loses all precision by
// |t + t_E| ~ 20; forward*backward = E holds to machine accuracy instead.
struct HyperbolicPoint {
    double q, p;
    double forward;   // sqrt(E) e^{+(t+t_E)}
    double backward;  // sqrt(E) e^{-(t+t_E)}
};

inline HyperbolicPoint hyperbolic_trajectory(double e, double t_e, double t) {
    if (!(e > 0)) throw ValidationError("hyperbolic_trajectory needs E > 0");
    const double s = std::sqrt(e);
    const double u = t + t_e;
    HyperbolicPoint pt;
    pt.forward = s * std::exp(u);
    pt.backward = s * std::exp(-u);
    pt.q = 0.5 * (pt.forward + pt.backward);
    pt.p = 0.5 * (pt.forward - pt.backward);
    return pt;
}

// All semiprimes with ensemble index exactly j, i.e. p_j^2 <= x y < p_{j+1}^2.
inline std::vector<Semiprime> enumerate_ensemble(std::uint64_t j, const PrimeCounter& counter) {
    if (j == 0) throw ValidationError("enumerate_ensemble needs j >= 1");
    const SievedPrimes& sieve = counter.sieve();
    if (j + 1 > sieve.primes.size()) throw BudgetError("enumerate_ensemble: j outside sieve budget");
    const std::uint64_t pj = sieve.nth(j), pj1 = sieve.nth(j + 1);
    const std::uint64_t lo = pj * pj, hi = pj1 * pj1;  // [lo, hi)
    if (hi - 1 > sieve.limit * sieve.limit) throw BudgetError("enumerate_ensemble: range outside sieve budget");

    std::vector<Semiprime> out;
    for (std::uint32_t x : sieve.primes) {
        const std::uint64_t xx = x;
        if (xx * xx >= hi) break;
        // y prime in [max(x, ceil(lo/x)), (hi-1)/x]
        std::uint64_t ylo = std::max<std::uint64_t>(xx, (lo + xx - 1) / xx);
        std::uint64_t yhi = (hi - 1) / xx;
        if (yhi > sieve.limit) throw BudgetError("enumerate_ensemble: cofactor outside sieve");
        auto first = std::lower_bound(sieve.primes.begin(), sieve.primes.end(), ylo);
        for (auto it = first; it != sieve.primes.end() && *it <= yhi; ++it) {
            Semiprime sp;
            sp.x = xx;
            sp.y = *it;
            sp.n = Wide(xx) * *it;
            sp.n_bits = bit_length(sp.n);
            out.push_back(sp);
        }
    }
    std::sort(out.begin(), out.end(), [](const Semiprime& a, const Semiprime& b) {
        return a.n != b.n ? a.n < b.n : a.x < b.x;
    });
    return out;
}

// Extended ensemble F(n): `count` semiprimes with balanced random prime
// factors of n_bits/2 bits and N in the open interval (2^{n-1}, 2^n).
// Deterministic per seed; item i draws from derive_seed(seed, i), so batch
// results are independent of evaluation order.
inline std::vector<Semiprime> sample_extended_ensemble(unsigned n_bits, std::size_t count,
                                                       std::uint64_t seed, unsigned threads = 1) {
    if (n_bits < 6 || n_bits % 2 != 0)
        throw ValidationError("sample_extended_ensemble needs even n_bits >= 6");
    const unsigned half = n_bits / 2;
    const Wide lo = Wide(1) << (n_bits - 1), hi = Wide(1) << n_bits;

    std::vector<Semiprime> out(count);
    parallel_for(count, threads, [&](std::size_t i) {
        const std::uint64_t item_seed = derive_seed(seed, i);
        for (std::uint64_t attempt = 0;; ++attempt) {
            Wide x = random_prime(half, derive_seed(item_seed, 2 * attempt));
            Wide y = random_prime(half, derive_seed(item_seed, 2 * attempt + 1));
            if (x > y) std::swap(x, y);
            Wide n = x * y;
            if (n > lo && n < hi) {
                out[i] = Semiprime{n, x, y, n_bits};
                return;
            }
            if (attempt > 4096) throw BudgetError("extended ensemble: range retries exhausted");
        }
    });
    return out;
}

// Meissel-Mertens constant, truncated from the published decimal expansion
inline constexpr double kMeisselMertens = 0.261497212847643;

// #F(j) ~ sqrt(N) (ln ln sqrt(N) + B)
inline double cardinality_estimate(const Wide& n) {
    if (n < 4) throw ValidationError("cardinality_estimate needs N >= 4");
    const double half_log = 0.5 * std::log(to_double(n));
    const double sqrt_n = std::exp(half_log);
    return sqrt_n * (std::log(half_log) + kMeisselMertens);
}

// Eq-level gauge bound: x_g = ceil(h^{2/3} (ln h)^g - k ln h) and the
// asymptotic ordinate bound q_g(k).
struct GaugeBound {
    double x_g;  // integral value (stored as double; can exceed 2^53 only far
                 // beyond desk scale)
    double q_g;
};

inline double q_gauge(int k, double g, double h) {
    const double lh = std::log(h);
    return (2.0 / 3.0) * k * std::pow(lh, -2 * g) * std::pow(h, -1.0 / 3.0)
        + std::pow(h, 1.0 / 3.0) * std::pow(lh, -g);
}

inline GaugeBound gauge_bound(int k, double g, double h) {
    if (!(h > std::exp(1.0))) throw ValidationError("gauge_bound needs h > e");
    const double lh = std::log(h);
    GaugeBound b;
    b.x_g = std::ceil(std::pow(h, 2.0 / 3.0) * std::pow(lh, g) - k * lh);
    b.q_g = q_gauge(k, g, h);
    if (!(b.x_g >= 2)) throw ValidationError("gauge_bound: x_g below 2 (k too large)");
    return b;
}

}  // namespace fspec
