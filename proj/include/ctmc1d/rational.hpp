#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational scalar type and string/JSON helpers.
 *
 * All rate algebra in this library is exact; floating point appears only
 * at the final evaluation step of diagnostics and simulation. Rationals
 * are GMP-backed so product-form measures and interpolation stay exact at
 * any magnitude.
 */

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ctmc1d {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat_of(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "3", "-7/2", "0" (optional whitespace). Throws on malformed input.
inline Rat parse_rat(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  Rat q;
  if (q.set_str(t, 10) != 0)
    throw std::invalid_argument("malformed rational literal: '" + s + "'");
  if (q.get_den() == 0)
    throw std::domain_error("rational literal with zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

/// Canonical "p/q" or "p" form; round-trips exactly through parse_rat.
inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline double to_double(const Rat& q) { return q.get_d(); }

inline int sign(const Rat& q) { return sgn(q); }

/// x^(n) = x(x-1)...(x-n+1) for x >= n, else 0.
inline Int falling_factorial(const Int& x, unsigned long n) {
  if (x < static_cast<long>(n)) return 0;
  Int acc = 1;
  for (unsigned long i = 0; i < n; ++i) acc *= x - static_cast<long>(i);
  return acc;
}

inline Int falling_factorial(unsigned long x, unsigned long n) {
  return falling_factorial(Int(x), n);
}

}  // namespace ctmc1d
