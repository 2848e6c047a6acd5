#pragma once

/**
 * @file rate.hpp
 * @brief Transition rates as ratios of falling-factorial polynomials, and
 *        their Laurent-type asymptotics rate(x) = a x^R + b x^{R-1} + O(x^{R-2}).
 */

#include "polynomial.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace ctmc1d {

/// Two leading terms of the expansion at infinity. A rate that is
/// identically zero is an explicit variant (is_zero), never a numeric R.
struct LaurentExpansion {
  bool is_zero = false;
  long R = 0;
  Rat a;
  Rat b;
  bool exact_tail = true;  // rational functions always admit the expansion

  static LaurentExpansion zero() { return {true, 0, Rat(0), Rat(0), true}; }
};

/// Signed rational function in the monomial basis, reduced and with a
/// positive-leading denominator. Internal analysis type (drift m(x) and
/// combinations like m(x)x - v(x) are signed).
struct SignedRationalFn {
  MonomialPoly num;
  MonomialPoly den{{Rat(1)}};

  SignedRationalFn() = default;
  SignedRationalFn(MonomialPoly n, MonomialPoly d) : num(std::move(n)), den(std::move(d)) {
    reduce();
  }

  void reduce() {
    if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num.is_zero()) {
      den = MonomialPoly({Rat(1)});
      return;
    }
    MonomialPoly g = poly_gcd(num, den);
    if (g.degree() > 0) {
      num = poly_div_exact(num, g);
      den = poly_div_exact(den, g);
    }
    Rat s = Rat(1) / den.lead();
    num = s * num;
    den = s * den;  // monic denominator
  }

  bool is_zero() const { return num.is_zero(); }

  Rat eval(const Int& x) const {
    Rat d = den.eval(x);
    if (d == 0) throw std::domain_error("rational function pole at probed state");
    return num.eval(x) / d;
  }
  Rat eval(long x) const { return eval(Int(x)); }

  friend SignedRationalFn operator+(const SignedRationalFn& f, const SignedRationalFn& g) {
    return {f.num * g.den + g.num * f.den, f.den * g.den};
  }
  friend SignedRationalFn operator-(const SignedRationalFn& f, const SignedRationalFn& g) {
    return {f.num * g.den - g.num * f.den, f.den * g.den};
  }
  friend SignedRationalFn operator*(const Rat& s, const SignedRationalFn& f) {
    return {s * f.num, f.den};
  }
  friend SignedRationalFn operator*(const MonomialPoly& p, const SignedRationalFn& f) {
    return {p * f.num, f.den};
  }

  /// Asymptotic degree (num deg - den deg); nullopt for the zero function.
  std::optional<long> degree() const {
    if (is_zero()) return std::nullopt;
    return num.degree() - den.degree();
  }
  /// Leading coefficient of the expansion at infinity (signed).
  Rat lead() const {
    if (is_zero()) return Rat(0);
    return num.lead() / den.lead();
  }

  LaurentExpansion laurent() const {
    if (is_zero()) return LaurentExpansion::zero();
    long dn = num.degree(), dd = den.degree();
    Rat a = num.lead() / den.lead();
    Rat b = (num.coeff(dn - 1) - a * den.coeff(dd - 1)) / den.lead();
    return {false, dn - dd, a, b, true};
  }
};

/// Options for the denominator/numerator sign audit on construction.
struct RateCheckOptions {
  long window = -1;  // probed states 0..window; -1 selects 10*deg + 100
  bool check_numerator_nonneg = true;
};

/// Transition rate num/den with exact rational coefficients. Invariants,
/// enforced on construction: the denominator is strictly positive at every
/// probed non-negative integer and has a positive leading coefficient; the
/// numerator is non-negative there and has a positive leading coefficient
/// unless identically zero. Canonical form: common polynomial factors
/// cancelled, denominator monic in the monomial basis.
class RationalRate {
 public:
  RationalRate() : RationalRate(FallingPoly::constant(Rat(0)), FallingPoly::constant(Rat(1))) {}

  RationalRate(FallingPoly num, FallingPoly den, RateCheckOptions opts = {}) {
    MonomialPoly n = to_monomial(num), d = to_monomial(den);
    canonicalize(n, d);
    num_m_ = std::move(n);
    den_m_ = std::move(d);
    num_ = to_falling(num_m_);
    den_ = to_falling(den_m_);
    check(opts);
  }

  static RationalRate from_monomial(MonomialPoly num, MonomialPoly den,
                                    RateCheckOptions opts = {}) {
    return RationalRate(to_falling(num), to_falling(den), opts);
  }
  static RationalRate constant(const Rat& c) {
    return RationalRate(FallingPoly::constant(c), FallingPoly::constant(Rat(1)));
  }
  /// kappa * x^(n) (mass-action form), denominator 1.
  static RationalRate falling_monomial(const Rat& kappa, std::size_t n) {
    return RationalRate(FallingPoly::monomial_falling(kappa, n), FallingPoly::constant(Rat(1)));
  }

  const FallingPoly& numerator() const { return num_; }
  const FallingPoly& denominator() const { return den_; }
  const MonomialPoly& numerator_monomial() const { return num_m_; }
  const MonomialPoly& denominator_monomial() const { return den_m_; }

  bool is_zero() const { return num_.is_zero(); }

  Rat eval(const Int& x) const {
    if (num_.is_zero()) return Rat(0);
    return num_.eval(x) / den_.eval(x);
  }
  Rat eval(long x) const { return eval(Int(x)); }

  SignedRationalFn as_signed() const { return {num_m_, den_m_}; }

  friend bool operator==(const RationalRate& r, const RationalRate& s) {
    return r.num_ == s.num_ && r.den_ == s.den_;
  }

 private:
  void canonicalize(MonomialPoly& n, MonomialPoly& d) {
    if (d.is_zero()) throw std::domain_error("rate with zero denominator");
    if (n.is_zero()) {
      d = MonomialPoly({Rat(1)});
      return;
    }
    MonomialPoly g = poly_gcd(n, d);
    if (g.degree() > 0) {
      n = poly_div_exact(n, g);
      d = poly_div_exact(d, g);
    }
    Rat s = Rat(1) / d.lead();
    n = s * n;
    d = s * d;
  }

  void check(const RateCheckOptions& opts) const {
    long deg = std::max(num_m_.degree(), den_m_.degree());
    long window = opts.window >= 0 ? opts.window : 10 * std::max(deg, 0L) + 100;
    if (den_m_.lead() <= 0)
      throw std::domain_error("rate denominator has non-positive leading coefficient");
    for (long x = 0; x <= window; ++x)
      if (den_m_.eval(x) <= 0)
        throw std::domain_error("rate denominator not positive at x=" + std::to_string(x));
    if (opts.check_numerator_nonneg && !num_m_.is_zero()) {
      if (num_m_.lead() <= 0)
        throw std::domain_error("rate numerator has negative leading coefficient");
      for (long x = 0; x <= window; ++x)
        if (num_m_.eval(x) < 0)
          throw std::domain_error("rate numerator negative at x=" + std::to_string(x));
    }
  }

  FallingPoly num_, den_;
  MonomialPoly num_m_, den_m_;
};

/// Two steps of asymptotic long division of the monomial forms.
inline LaurentExpansion laurent_expand(const RationalRate& r) {
  if (r.is_zero()) return LaurentExpansion::zero();
  return r.as_signed().laurent();
}

}  // namespace ctmc1d
