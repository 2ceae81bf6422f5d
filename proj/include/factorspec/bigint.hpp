#pragma once

// Wide-integer support.  Semiprimes and their factors are unbounded in the
// interfaces; boost::multiprecision::cpp_int backs them.  Hot paths (64-bit
// primality, sieving) stay on native words.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace fspec {

using Wide = boost::multiprecision::cpp_int;

inline Wide isqrt(const Wide& n) { return boost::multiprecision::sqrt(n); }

inline unsigned bit_length(const Wide& n) {
    return n == 0 ? 0 : boost::multiprecision::msb(n) + 1;
}

inline std::uint64_t low_u64(const Wide& n) { return n.convert_to<std::uint64_t>(); }

inline double to_double(const Wide& n) { return n.convert_to<double>(); }

inline std::string to_string(const Wide& n) { return n.str(); }

inline Wide parse_wide(const std::string& s) { return Wide(s); }

// floor(sqrt(n)) for native words, exact (no float round-off)
inline std::uint64_t isqrt_u64(std::uint64_t n) {
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    if (r > 0xFFFFFFFFull) r = 0xFFFFFFFFull;
    while (r > 0 && r * r > n) --r;
    while (r + 1 <= 0xFFFFFFFFull && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace fspec
