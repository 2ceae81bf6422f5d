#pragma once

// Prime counting, primality and prime generation, plus ingestion of zeta-zero
// tables.  pi(x) comes in two exact flavors (sieve lookup and a combinatorial
// Lucy/Meissel-style count) that must agree wherever both apply; the
// truncated Riemann-series approximation lives in riemann.hpp.

#include "factorspec/bigint.hpp"
#include "factorspec/rng.hpp"
#include "factorspec/util.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace fspec {

// ---------------------------------------------------------------------------
// 64-bit primality

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

namespace detail {

inline bool mr_witness_u64(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return false;
    }
    return true;  // a witnesses compositeness
}

}  // namespace detail

// Deterministic for the full 64-bit range (first-12-primes witness set).
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (detail::mr_witness_u64(n, a, d, s)) return false;
    }
    return true;
}

// Exact below 2^64; above, Miller-Rabin with `rounds` deterministic
// pseudo-random bases (error probability < 4^-rounds).
inline bool is_prime(const Wide& n, int rounds = 40) {
    if (n < 0) throw ValidationError("is_prime: negative input");
    if (n <= 0xFFFFFFFFFFFFFFFFull) return is_prime_u64(low_u64(n));

    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                            31ull, 37ull, 41ull, 43ull, 47ull, 53ull, 59ull, 61ull, 67ull, 71ull}) {
        if (n % p == 0) return false;  // n > 2^64, so n != p
    }
    Wide d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // bases derived from the number itself: deterministic, independent-ish
    std::uint64_t h = low_u64(n & 0xFFFFFFFFFFFFFFFFull) ^ (0x9E3779B97F4A7C15ull * bit_length(n));
    const Wide span = n - 3;
    for (int r = 0; r < rounds; ++r) {
        const std::uint64_t raw = splitmix64(h);
        const Wide a = 2 + Wide(raw) % span;
        Wide x = boost::multiprecision::powm(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = (x * x) % n;
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Sieve

// Odd-wheel Eratosthenes sieve; holds the prime list up to `limit` and
// answers pi / membership / nth-prime queries by binary search.
struct SievedPrimes {
    std::uint64_t limit = 0;
    std::vector<std::uint32_t> primes;

    static SievedPrimes build(std::uint64_t limit) {
        if (limit > 0xFFFFFFFFull) throw BudgetError("sieve limit above 2^32 unsupported");
        SievedPrimes sp;
        sp.limit = limit;
        if (limit >= 2) sp.primes.push_back(2);
        if (limit < 3) return sp;
        const std::uint64_t half = (limit - 1) / 2;  // index i <-> odd 2i+1, i >= 1
        std::vector<std::uint8_t> composite(half + 1, 0);
        for (std::uint64_t i = 1; (2 * i + 1) * (2 * i + 1) <= limit; ++i) {
            if (composite[i]) continue;
            const std::uint64_t p = 2 * i + 1;
            for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p) composite[j] = 1;
        }
        for (std::uint64_t i = 1; i <= half; ++i)
            if (!composite[i]) sp.primes.push_back(static_cast<std::uint32_t>(2 * i + 1));
        return sp;
    }

    std::uint64_t pi(std::uint64_t x) const {
        if (x > limit) throw BudgetError("pi query above sieve limit");
        return static_cast<std::uint64_t>(
            std::upper_bound(primes.begin(), primes.end(), x) - primes.begin());
    }

    bool contains(std::uint64_t x) const {
        if (x > limit) throw BudgetError("membership query above sieve limit");
        return std::binary_search(primes.begin(), primes.end(), static_cast<std::uint32_t>(x));
    }

    // j-th prime, 1-based
    std::uint64_t nth(std::uint64_t j) const {
        if (j == 0 || j > primes.size()) throw BudgetError("nth prime outside sieve");
        return primes[j - 1];
    }
};

// ---------------------------------------------------------------------------
// Combinatorial pi (Lucy/Meissel family, ~n^{3/4} work, exact)

// Sieve state for one n: after the pass, small[v] = pi(v) for v <= n/r and
// large[i] = pi(floor(n/i)) for i <= r = isqrt(n).  The quotient points are
// exactly the values a factor search over [2, sqrt(n)] needs, so the cache
// doubles as a batch pi oracle for the inversion module.
struct QuotientPiCache {
    std::uint64_t n = 0, root = 0, nu = 0;
    std::vector<std::uint64_t> small, large;

    explicit QuotientPiCache(std::uint64_t n_in) : n(n_in) {
        if (n < 2) throw ValidationError("pi cache needs n >= 2");
        root = isqrt_u64(n);
        nu = n / root;
        large.resize(root + 1);
        small.resize(nu + 1);
        for (std::uint64_t i = 1; i <= root; ++i) large[i] = n / i - 1;
        for (std::uint64_t v = 1; v <= nu; ++v) small[v] = v - 1;
        for (std::uint64_t p = 2; p <= root; ++p) {
            if (small[p] == small[p - 1]) continue;  // p composite
            const std::uint64_t sp = small[p - 1];
            const std::uint64_t p2 = p * p;
            const std::uint64_t imax = std::min(root, n / p2);
            for (std::uint64_t i = 1; i <= imax; ++i) {
                const std::uint64_t d = i * p;
                large[i] -= ((d <= root) ? large[d] : small[n / d]) - sp;
            }
            for (std::uint64_t v = nu; v >= p2; --v) small[v] -= small[v / p] - sp;
        }
    }

    std::uint64_t pi_small(std::uint64_t v) const { return v == 0 ? 0 : small[v]; }
    std::uint64_t pi_quotient(std::uint64_t i) const { return large[i]; }
};

inline std::uint64_t pi_combinatorial(std::uint64_t n) {
    if (n < 2) return 0;
    return QuotientPiCache(n).pi_quotient(1);
}

// ---------------------------------------------------------------------------
// Zeta-zero tables

// first zero ordinate, from published tables (Odlyzko)
inline constexpr double kFirstZetaZero = 14.134725141734693;

// Ordered positive ordinates t_l of nontrivial zeros 1/2 + i t_l; only the
// upper-half-plane member of each conjugate pair is stored.
struct ZetaZeroTable {
    std::vector<double> zeros;

    std::size_t count() const { return zeros.size(); }

    void validate() const {
        double prev = 0;
        for (std::size_t i = 0; i < zeros.size(); ++i) {
            if (!(zeros[i] > 0))
                throw ValidationError("zero table: non-positive entry at index " + std::to_string(i + 1));
            if (!(zeros[i] > prev))
                throw ValidationError("zero table: non-ascending entry at index " + std::to_string(i + 1));
            prev = zeros[i];
        }
        if (!zeros.empty() && std::fabs(zeros[0] - kFirstZetaZero) > 1e-3)
            throw ValidationError("zero table: first entry does not match the first known zero");
    }
};

// Plain text, one positive decimal per line, ascending; '#' comments allowed.
inline ZetaZeroTable load_zeros(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open zero table: " + path);
    ZetaZeroTable table;
    std::string line;
    std::size_t lineno = 0;
    double prev = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        double value = 0;
        std::istringstream iss(line);
        if (!(iss >> value))
            throw ValidationError(path + ":" + std::to_string(lineno) + ": unparsable zero ordinate");
        std::string trailing;
        if (iss >> trailing)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": trailing content after value");
        if (!(value > 0))
            throw ValidationError(path + ":" + std::to_string(lineno) + ": non-positive zero ordinate");
        if (!(value > prev))
            throw ValidationError(path + ":" + std::to_string(lineno) + ": zeros not strictly ascending");
        prev = value;
        table.zeros.push_back(value);
    }
    table.validate();
    return table;
}

// ---------------------------------------------------------------------------
// PrimeCounter

enum class PiMode { sieve, combinatorial, riemann_truncated };

// Exact prime counting behind one interface.  Sieve mode answers only up to
// its limit; combinatorial mode is exact for any x within the work budget.
class PrimeCounter {
  public:
    explicit PrimeCounter(PiMode mode = PiMode::sieve, std::uint64_t sieve_limit = 1u << 21,
                          std::optional<ZetaZeroTable> table = std::nullopt)
        : mode_(mode), table_(std::move(table)), sieve_(SievedPrimes::build(sieve_limit)) {
        if (table_) table_->validate();
    }

    PiMode mode() const { return mode_; }
    std::uint64_t sieve_limit() const { return sieve_.limit; }
    const SievedPrimes& sieve() const { return sieve_; }
    const std::optional<ZetaZeroTable>& zero_table() const { return table_; }

    void set_combinatorial_budget(std::uint64_t max_x) { combinatorial_budget_ = max_x; }

    // exact pi at an integer argument
    std::uint64_t pi_u64(std::uint64_t x) const {
        if (x <= sieve_.limit) return sieve_.pi(x);
        if (mode_ == PiMode::sieve) throw BudgetError("pi beyond sieve limit in sieve mode");
        if (x > combinatorial_budget_) throw BudgetError("pi beyond combinatorial budget");
        return pi_combinatorial(x);
    }

    // pi over the reals is the step function through floor(x)
    std::uint64_t pi_floor(double x) const {
        if (!(x >= 0)) throw ValidationError("pi of negative argument");
        return x < 2 ? 0 : pi_u64(static_cast<std::uint64_t>(x));
    }

    std::uint64_t pi_wide(const Wide& x) const {
        if (x < 0) throw ValidationError("pi of negative argument");
        if (x > Wide(combinatorial_budget_)) throw BudgetError("pi beyond combinatorial budget");
        return pi_u64(low_u64(x));
    }

    // defined in riemann.hpp (riemann_truncated mode)
    double pi_riemann(double x) const;

  private:
    PiMode mode_;
    std::optional<ZetaZeroTable> table_;
    SievedPrimes sieve_;
    std::uint64_t combinatorial_budget_ = 1000000000000ull;
};

inline std::uint64_t pi_exact(double x, const PrimeCounter& counter) { return counter.pi_floor(x); }

// ---------------------------------------------------------------------------
// Prime generation

// Uniform random prime with exactly `bits` bits, deterministic per seed.
// Fresh candidates are drawn until one passes, so the output is uniform over
// the primes of that width (no gap-size bias).
inline Wide random_prime(unsigned bits, std::uint64_t seed) {
    if (bits < 3) throw ValidationError("random_prime needs bits >= 3");
    Rng rng(seed);
    const int budget = 256 * static_cast<int>(bits);
    for (int attempt = 0; attempt < budget; ++attempt) {
        Wide candidate;
        if (bits <= 64) {
            std::uint64_t top = 1ull << (bits - 1);
            std::uint64_t value = top | 1ull;
            if (bits > 2) value |= rng.next_below(top >> 1) << 1;
            candidate = value;
        } else {
            candidate = 1;
            for (unsigned taken = 1; taken < bits; taken += 64) {
                const unsigned chunk = std::min(64u, bits - taken);
                candidate <<= chunk;
                std::uint64_t word = rng.next_u64();
                if (chunk < 64) word &= (1ull << chunk) - 1;
                candidate |= word;
            }
            candidate |= 1;  // odd
        }
        if (is_prime(candidate)) return candidate;
    }
    throw BudgetError("random_prime: retry budget exhausted (check bits/rng configuration)");
}

}  // namespace fspec
