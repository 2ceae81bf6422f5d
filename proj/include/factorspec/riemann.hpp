#pragma once

// Riemann's smooth approximation R(x) to pi(x) (Gram series) and the
// truncated zero-sum correction factor varsigma_T.  Zero terms R(x^s) at
// s = 1/2 + i t are evaluated through the logarithmic integral
// li(x^s) = Ei(s ln x), continued to the upper half plane; conjugate zeros
// are folded in by taking twice the real part, so the result is real.

#include "factorspec/primes.hpp"
#include "factorspec/util.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace fspec {

// zeta(m) for integer m >= 2, direct sum plus Euler-Maclaurin tail, cached.
inline double zeta_int(int m) {
    static const std::vector<double> cache = [] {
        constexpr int kMax = 256;
        constexpr int kN = 256;
        static const double b2k[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
        std::vector<double> z(kMax + 1, 0.0);
        for (int mm = 2; mm <= kMax; ++mm) {
            long double sum = 0;
            for (int n = kN - 1; n >= 1; --n) sum += std::pow((long double)n, -(long double)mm);
            long double npw = std::pow((long double)kN, -(long double)mm);  // N^-m
            sum += (long double)kN * npw / (mm - 1);                        // N^(1-m)/(m-1)
            sum += npw / 2;
            long double rising = mm;  // m(m+1)...(m+2k-2)
            long double nfac = npw / kN;
            long double fact = 2;
            for (int k = 1; k <= 6; ++k) {
                sum += b2k[k - 1] / fact * rising * nfac;
                nfac /= (long double)kN * kN;
                rising *= (mm + 2 * k - 1) * (long double)(mm + 2 * k);
                fact *= (2 * k + 1) * (2 * k + 2);
            }
            z[mm] = (double)sum;
        }
        return z;
    }();
    if (m < 2 || m >= (int)cache.size()) throw ValidationError("zeta_int argument out of cached range");
    return cache[m];
}

// Gram series: R(x) = 1 + sum_k (ln x)^k / (k k! zeta(k+1)), truncated at
// 1e-12 relative.
inline double riemann_R(double x) {
    if (!(x > 1)) throw ValidationError("riemann_R needs x > 1");
    const double lx = std::log(x);
    double sum = 1.0;
    double power = 1.0;  // (ln x)^k / k!
    for (int k = 1; k <= 400; ++k) {
        power *= lx / k;
        const double term = power / (k * zeta_int(k + 1));
        sum += term;
        if (std::fabs(term) < 1e-12 * std::fabs(sum) && k > lx) return sum;
    }
    throw BudgetError("riemann_R: series did not converge within term budget");
}

namespace detail {

using cll = std::complex<long double>;

// Ei(z) for Im z > 0: convergent series below the crossover, asymptotic
// expansion above.  The series form is gamma + Log z + sum z^k/(k k!).
inline cll ei_upper(cll z) {
    const long double az = std::abs(z);
    if (az < 28) {
        const long double euler_gamma = 0.577215664901532860606512090082L;
        cll sum = euler_gamma + std::log(z);
        cll term(1, 0);
        for (int k = 1; k <= 160; ++k) {
            term *= z / (long double)k;
            sum += term / (long double)k;
            if (std::abs(term) < 1e-20L * (long double)k) break;
        }
        return sum;
    }
    // e^z/z * sum_k k!/z^k, truncated at the smallest term
    cll sum(1, 0), term(1, 0);
    long double last = 1;
    for (int k = 1; k <= 80; ++k) {
        term *= (long double)k / z;
        const long double mag = std::abs(term);
        if (mag > last) break;  // divergent tail reached
        sum += term;
        last = mag;
        if (mag < 1e-20L) break;
    }
    return std::exp(z) / z * sum;
    // The continuation constant i*pi is dropped: it cancels against the
    // conjugate zero, and only 2 Re(li) is ever consumed.
}

}  // namespace detail

// One folded zero term: 2 Re li(x^{1/2 + i t})
inline double zero_term(double x, double t) {
    const detail::cll z(0.5L * std::log((long double)x), (long double)t * std::log((long double)x));
    return 2.0 * (double)detail::ei_upper(z).real();
}

// varsigma_T(x) = 1 - sum_{l<=T} R(x^{s_l})/R(x), zeros paired with their
// conjugates.  T = 0 gives exactly 1.
inline double varsigma_T(double x, const ZetaZeroTable& table, std::size_t T) {
    if (!(x > 1)) throw ValidationError("varsigma_T needs x > 1");
    if (T > table.count()) throw ValidationError("varsigma_T: T exceeds table size");
    if (T == 0) return 1.0;
    const double R = riemann_R(x);
    long double sum = 0;
    for (std::size_t l = 0; l < T; ++l) sum += zero_term(x, table.zeros[l]);
    return 1.0 - (double)(sum / (long double)R);
}

// pi(x) ~ varsigma_T(x) R(x)
inline double pi_approx(double x, const ZetaZeroTable& table, std::size_t T) {
    return varsigma_T(x, table, T) * riemann_R(x);
}

inline double PrimeCounter::pi_riemann(double x) const {
    if (mode_ != PiMode::riemann_truncated)
        throw ValidationError("pi_riemann requires riemann_truncated mode");
    if (!table_) throw ValidationError("pi_riemann requires a zero table");
    return pi_approx(x, *table_, table_->count());
}

}  // namespace fspec
