#pragma once

// Arbitrary-precision rationals (GMP) plus the small set of conversions the
// rest of the library needs.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pingpong {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

// "p" or "p/q", base 10.
inline std::string rat_to_string(const Rat& r) { return r.get_str(10); }

inline int sgn(const Rat& r) { return ::sgn(r); }

inline double rat_to_double(const Rat& r) { return r.get_d(); }

}  // namespace pingpong
