// gen_zeros: regenerate the bundled table of nontrivial zeta-zero ordinates.
//
// The library itself only ingests zero tables (see factorspec/primes.hpp);
// this standalone tool exists so the data file under data/ can be rebuilt
// from scratch.  Zeros are located as sign changes of the Hardy Z function,
// bracketed with the Riemann-Siegel main sum and polished with an
// Euler-Maclaurin evaluation of zeta(1/2 + it) in long double precision.
//
// Usage: gen_zeros [count] [outfile]

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

using ld = long double;
using cld = std::complex<ld>;

const ld kPi = 3.14159265358979323846264338327950288L;

// Riemann-Siegel theta, asymptotic expansion.  Good to ~1e-12 for t > 10.
ld theta(ld t) {
    const ld t2 = t * t;
    return t / 2 * std::log(t / (2 * kPi)) - t / 2 - kPi / 8
        + 1.0L / (48 * t) + 7.0L / (5760 * t * t2) + 31.0L / (80640 * t2 * t2 * t);
}

// zeta(s) by Euler-Maclaurin.  Term count scales with |Im s|.
cld zeta_em(cld s) {
    const ld t = std::abs(s.imag());
    const int N = std::max(60, (int)std::ceil(0.7L * t) + 40);
    static const ld b2k[] = {  // B_2 .. B_28
        1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66,
        -691.0L / 2730, 7.0L / 6, -3617.0L / 510, 43867.0L / 798,
        -174611.0L / 330, 854513.0L / 138, -236364091.0L / 2730,
        8553103.0L / 6, -23749461029.0L / 870};

    cld sum(0, 0);
    for (int n = 1; n < N; ++n)
        sum += std::exp(-s * std::log((ld)n));
    const cld Ns = std::exp(-s * std::log((ld)N));
    sum += Ns / 2.0L;
    sum += (ld)N * Ns / (s - cld(1, 0));

    // tail: sum_k B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(1-s-2k)
    cld rising = s;             // s(s+1)...(s+2k-2)
    cld npow = Ns / (ld)N;      // N^(-s-2k+1), starting at k = 1
    ld fact = 2;                // (2k)!
    for (int k = 1; k <= 14; ++k) {
        sum += b2k[k - 1] / fact * rising * npow;
        npow /= (ld)(N) * (ld)N;
        rising *= (s + cld(2 * k - 1, 0)) * (s + cld(2 * k, 0));
        fact *= (2 * k + 1) * (2 * k + 2);
    }
    return sum;
}

// Hardy Z via Euler-Maclaurin (exact zeros, any t).
ld z_em(ld t) {
    const cld z = zeta_em(cld(0.5L, t));
    const ld th = theta(t);
    return (ld)(std::cos(th) * z.real() - std::sin(th) * z.imag());
}

// Hardy Z via Riemann-Siegel main sum + first correction.  Cheap; used to scan.
ld z_rs(ld t) {
    const ld a = std::sqrt(t / (2 * kPi));
    const int m = (int)a;
    const ld th = theta(t);
    ld z = 0;
    for (int n = 1; n <= m; ++n)
        z += std::cos(th - t * std::log((ld)n)) / std::sqrt((ld)n);
    z *= 2;
    const ld p = a - m;
    const ld c0 = std::cos(2 * kPi * (p * p - p - 1.0L / 16)) / std::cos(2 * kPi * p);
    z += (m % 2 == 0 ? -1 : 1) * std::pow(2 * kPi / t, 0.25L) * c0;
    return z;
}

ld z_any(ld t) { return t < 30 ? z_em(t) : z_rs(t); }

// bisect f on [a,b] assuming f(a)f(b) < 0
template <class F>
ld bisect(F f, ld a, ld b, int iters) {
    ld fa = f(a);
    for (int i = 0; i < iters; ++i) {
        const ld m = (a + b) / 2;
        const ld fm = f(m);
        if ((fa < 0) == (fm < 0)) { a = m; fa = fm; } else { b = m; }
    }
    return (a + b) / 2;
}

}  // namespace

int main(int argc, char** argv) {
    const int want = argc > 1 ? std::atoi(argv[1]) : 2500;
    const std::string out = argc > 2 ? argv[2] : "zeros.txt";

    std::vector<ld> zeros;
    const ld step = 0.06L;
    ld t = 12.0L;
    ld prev = z_any(t);
    while ((int)zeros.size() < want && t < 1.0e5L) {
        const ld tn = t + step;
        const ld cur = z_any(tn);
        if ((prev < 0) != (cur < 0)) {
            // coarse root from the scan evaluator, then polish with E-M
            ld r = bisect(z_any, t, tn, 30);
            ld lo = r - 3e-4L, hi = r + 3e-4L;
            if ((z_em(lo) < 0) == (z_em(hi) < 0)) {
                // scan evaluators disagreed near an extremum; rescan finely
                bool found = false;
                ld fa = z_em(t), tt = t;
                for (; tt < tn; tt += step / 200) {
                    const ld fb = z_em(tt + step / 200);
                    if ((fa < 0) != (fb < 0)) { lo = tt; hi = tt + step / 200; found = true; break; }
                    fa = fb;
                }
                if (!found) { t = tn; prev = cur; continue; }
            }
            r = bisect(z_em, lo, hi, 64);
            zeros.push_back(r);
        }
        t = tn;
        prev = cur;
    }

    if ((int)zeros.size() < want) {
        std::fprintf(stderr, "only found %zu zeros\n", zeros.size());
        return 1;
    }

    // sanity: first ordinates against their well-known values
    const ld known[] = {14.134725141734693L, 21.022039638771555L, 25.010857580145688L};
    for (int i = 0; i < 3; ++i) {
        if (std::fabs((double)(zeros[i] - known[i])) > 1e-6) {
            std::fprintf(stderr, "zero %d off: %.12Lf vs %.12Lf\n", i + 1, zeros[i], known[i]);
            return 1;
        }
    }
    // sanity: Riemann-von Mangoldt count at the top of the range
    {
        const ld T = zeros[want - 1];
        const ld n_of_t = theta(T) / kPi + 1;
        if (std::fabs((double)(n_of_t - want)) > 3) {
            std::fprintf(stderr, "count mismatch: N(%.3Lf)=%.2Lf vs %d collected\n", T, n_of_t, want);
            return 1;
        }
    }

    std::FILE* f = std::fopen(out.c_str(), "w");
    if (!f) { std::perror("fopen"); return 1; }
    std::fprintf(f, "# ordinates t_k of the first %d nontrivial zeros 1/2 + i t_k of the zeta function\n", want);
    std::fprintf(f, "# one ascending positive decimal per line; regenerate with tools/gen_zeros\n");
    for (int i = 0; i < want; ++i)
        std::fprintf(f, "%.12Lf\n", zeros[i]);
    std::fclose(f);
    std::fprintf(stderr, "wrote %d zeros to %s (last = %.6Lf)\n", want, out.c_str(), zeros[want - 1]);
    return 0;
}
