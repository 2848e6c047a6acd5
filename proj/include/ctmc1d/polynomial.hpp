#pragma once

/**
 * @file polynomial.hpp
 * @brief Exact univariate polynomials in the monomial and falling-factorial
 *        bases, with basis change by evaluation/interpolation.
 *
 * The falling-factorial basis x^(i) = x(x-1)...(x-i+1) is the natural basis
 * for mass-action rates; the monomial basis is used for asymptotics. Both
 * directions of the basis change go through exact evaluation at x = 0..deg
 * followed by divided-difference interpolation, so each is testable against
 * the other by pointwise equality.
 */

#include "rational.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace ctmc1d {

namespace detail {

inline void strip_trailing_zeros(std::vector<Rat>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

// Divided differences over the unit-spaced nodes 0,1,...,n. For values
// v[j] = p(j) this yields exactly the falling-factorial coefficients of p.
inline std::vector<Rat> divided_differences(std::vector<Rat> v) {
  const std::size_t n = v.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t j = n - 1; j >= level; --j)
      v[j] = (v[j] - v[j - 1]) / Rat(static_cast<long>(level));
  return v;
}

}  // namespace detail

/// Dense polynomial in the monomial basis; coeffs[i] multiplies x^i.
/// Canonical form has no trailing zero coefficients (zero poly is empty).
struct MonomialPoly {
  std::vector<Rat> coeffs;

  MonomialPoly() = default;
  explicit MonomialPoly(std::vector<Rat> c) : coeffs(std::move(c)) { normalize(); }
  static MonomialPoly constant(const Rat& c) {
    return c == 0 ? MonomialPoly() : MonomialPoly({c});
  }

  void normalize() { detail::strip_trailing_zeros(coeffs); }
  bool is_zero() const { return coeffs.empty(); }
  /// Degree of the zero polynomial is reported as -1.
  long degree() const { return static_cast<long>(coeffs.size()) - 1; }
  const Rat& lead() const { return coeffs.back(); }
  Rat coeff(long i) const {
    if (i < 0 || i >= static_cast<long>(coeffs.size())) return Rat(0);
    return coeffs[static_cast<std::size_t>(i)];
  }

  Rat eval(const Int& x) const {
    Rat acc(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  }
  Rat eval(long x) const { return eval(Int(x)); }
  double eval_double(double x) const {
    double acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + to_double(coeffs[i]);
    return acc;
  }

  friend MonomialPoly operator+(const MonomialPoly& a, const MonomialPoly& b) {
    std::vector<Rat> c(std::max(a.coeffs.size(), b.coeffs.size()), Rat(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
    return MonomialPoly(std::move(c));
  }
  friend MonomialPoly operator-(const MonomialPoly& a, const MonomialPoly& b) {
    std::vector<Rat> c(std::max(a.coeffs.size(), b.coeffs.size()), Rat(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] -= b.coeffs[i];
    return MonomialPoly(std::move(c));
  }
  friend MonomialPoly operator*(const MonomialPoly& a, const MonomialPoly& b) {
    if (a.is_zero() || b.is_zero()) return MonomialPoly();
    std::vector<Rat> c(a.coeffs.size() + b.coeffs.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
    return MonomialPoly(std::move(c));
  }
  friend MonomialPoly operator*(const Rat& s, const MonomialPoly& p) {
    if (s == 0) return MonomialPoly();
    std::vector<Rat> c = p.coeffs;
    for (auto& x : c) x *= s;
    return MonomialPoly(std::move(c));
  }
  friend MonomialPoly operator-(const MonomialPoly& p) { return Rat(-1) * p; }
  friend bool operator==(const MonomialPoly& a, const MonomialPoly& b) {
    return a.coeffs == b.coeffs;
  }

  /// Multiplies by x^k.
  MonomialPoly shifted_up(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<Rat> c(coeffs.size() + k, Rat(0));
    std::copy(coeffs.begin(), coeffs.end(), c.begin() + static_cast<long>(k));
    return MonomialPoly(std::move(c));
  }
};

/// Euclidean remainder of a by b (b nonzero).
inline MonomialPoly poly_rem(MonomialPoly a, const MonomialPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  while (!a.is_zero() && a.degree() >= b.degree()) {
    Rat q = a.lead() / b.lead();
    std::size_t shift = static_cast<std::size_t>(a.degree() - b.degree());
    for (std::size_t i = 0; i < b.coeffs.size(); ++i)
      a.coeffs[i + shift] -= q * b.coeffs[i];
    a.normalize();
  }
  return a;
}

/// Monic gcd over Q (gcd of anything with 0 is the other argument, monic).
inline MonomialPoly poly_gcd(MonomialPoly a, MonomialPoly b) {
  while (!b.is_zero()) {
    MonomialPoly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero() && a.lead() != 1) a = (Rat(1) / a.lead()) * a;
  return a;
}

inline MonomialPoly poly_div_exact(const MonomialPoly& a, const MonomialPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  MonomialPoly r = a;
  std::vector<Rat> q(a.is_zero() ? 0 : static_cast<std::size_t>(std::max<long>(a.degree() - b.degree() + 1, 0)), Rat(0));
  while (!r.is_zero() && r.degree() >= b.degree()) {
    Rat c = r.lead() / b.lead();
    std::size_t shift = static_cast<std::size_t>(r.degree() - b.degree());
    q[shift] = c;
    for (std::size_t i = 0; i < b.coeffs.size(); ++i)
      r.coeffs[i + shift] -= c * b.coeffs[i];
    r.normalize();
  }
  if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
  return MonomialPoly(std::move(q));
}

/// Polynomial in the falling-factorial basis: p(x) = sum_i s_i x^(i),
/// x^(i) = x!/(x-i)! 1{x>=i}. Canonical form strips trailing zeros.
struct FallingPoly {
  std::vector<Rat> coeffs;  // coeffs[i] multiplies x^(i)

  FallingPoly() = default;
  explicit FallingPoly(std::vector<Rat> s) : coeffs(std::move(s)) { normalize(); }
  static FallingPoly constant(const Rat& c) {
    return c == 0 ? FallingPoly() : FallingPoly({c});
  }
  /// kappa * x^(n)
  static FallingPoly monomial_falling(const Rat& kappa, std::size_t n) {
    if (kappa == 0) return {};
    std::vector<Rat> s(n + 1, Rat(0));
    s[n] = kappa;
    return FallingPoly(std::move(s));
  }

  void normalize() { detail::strip_trailing_zeros(coeffs); }
  bool is_zero() const { return coeffs.empty(); }
  long degree() const { return static_cast<long>(coeffs.size()) - 1; }

  /// Exact evaluation at a non-negative integer state.
  Rat eval(const Int& x) const {
    Rat acc(0);
    Int ff = 1;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (i > 0) {
        if (x < static_cast<long>(i)) break;  // all higher x^(i) vanish
        ff *= x - static_cast<long>(i - 1);
      }
      if (coeffs[i] != 0) acc += coeffs[i] * Rat(ff);
    }
    return acc;
  }
  Rat eval(long x) const { return eval(Int(x)); }

  friend bool operator==(const FallingPoly& a, const FallingPoly& b) {
    return a.coeffs == b.coeffs;
  }
  friend FallingPoly operator+(const FallingPoly& a, const FallingPoly& b) {
    std::vector<Rat> c(std::max(a.coeffs.size(), b.coeffs.size()), Rat(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
    return FallingPoly(std::move(c));
  }
  friend FallingPoly operator*(const Rat& s, const FallingPoly& p) {
    if (s == 0) return FallingPoly();
    std::vector<Rat> c = p.coeffs;
    for (auto& x : c) x *= s;
    return FallingPoly(std::move(c));
  }
};

/// Interpolating polynomial (monomial basis) through (j, values[j]), j = 0..n.
inline MonomialPoly monomial_from_values(const std::vector<Rat>& values) {
  std::vector<Rat> dd = detail::divided_differences(values);
  MonomialPoly acc;          // running Newton-form expansion
  MonomialPoly basis({Rat(1)});  // prod_{j<i} (x - j)
  for (std::size_t i = 0; i < dd.size(); ++i) {
    if (i > 0) basis = basis * MonomialPoly({Rat(-static_cast<long>(i - 1)), Rat(1)});
    if (dd[i] != 0) acc = acc + dd[i] * basis;
  }
  return acc;
}

/// Interpolating polynomial (falling basis) through (j, values[j]), j = 0..n.
/// At unit-spaced nodes the Newton basis is exactly the falling basis.
inline FallingPoly falling_from_values(const std::vector<Rat>& values) {
  return FallingPoly(detail::divided_differences(values));
}

inline MonomialPoly to_monomial(const FallingPoly& p) {
  if (p.is_zero()) return {};
  std::vector<Rat> vals;
  vals.reserve(static_cast<std::size_t>(p.degree()) + 1);
  for (long j = 0; j <= p.degree(); ++j) vals.push_back(p.eval(j));
  return monomial_from_values(vals);
}

inline FallingPoly to_falling(const MonomialPoly& p) {
  if (p.is_zero()) return {};
  std::vector<Rat> vals;
  vals.reserve(static_cast<std::size_t>(p.degree()) + 1);
  for (long j = 0; j <= p.degree(); ++j) vals.push_back(p.eval(j));
  return falling_from_values(vals);
}

}  // namespace ctmc1d
