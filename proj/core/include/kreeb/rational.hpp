#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace kreeb {

// Exact rational scalar. All function values, torus coordinates and
// translations are Rat; no floating point appears anywhere in the library.
using Rat = mpq_class;
using Int = mpz_class;

// gmpxx has no long long constructors; these keep 64-bit literals unambiguous.
inline Int to_int(long long v) { return Int(static_cast<long>(v)); }
inline Rat make_rat(long long num, long long den) {
    Rat r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
}

// Parses "p", "-p" or "p/q" with q > 0 after sign normalization.
// Throws SchemaError on anything else (including zero denominators).
Rat parse_rational(std::string_view s);

// "p/q" with the canonical reduced representation, "p" when q == 1.
std::string rat_str(const Rat& r);

// Representative of r mod 1 in [0, 1).
Rat mod1(const Rat& r);

// floor(r) as an integer.
Int rat_floor(const Rat& r);

// lcm of the denominators of the given rationals (1 for an empty list).
Int denominator_lcm(const std::vector<Rat>& rs);

}  // namespace kreeb
