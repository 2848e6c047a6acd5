#pragma once

/**
 * @file bd_oracle.hpp
 * @brief Classical series criteria for unit birth-death chains, used as an
 *        independent cross-check of the Lyapunov classifier.
 *
 * Recurrence is the divergence of sum_x prod_{y<=x} d(y)/b(y); positive
 * recurrence is the summability of the product-form stationary measure
 * prod_{y<=x} b(y-1)/d(y). Both are decided symbolically from the Laurent
 * expansion of the ratio; for rational rates the boundary exponent -1 always
 * resolves (a rational expansion has no 1/(x log x) term, so the asymptotic
 * ratio test applies strictly). Indeterminate is kept in the result enums
 * for boundary cases outside the rational class.
 */

#include "distribution.hpp"
#include "rate.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace ctmc1d {

/// Unit birth-death chain: birth rate b (eta=+1), death rate d (eta=-1,
/// clamped to 0 at x=0). b must be positive on 0..window, d on 1..window.
struct BirthDeathModel {
  RationalRate b;
  RationalRate d;

  BirthDeathModel(RationalRate birth, RationalRate death, long window = 200)
      : b(std::move(birth)), d(std::move(death)) {
    for (long x = 0; x <= window; ++x)
      if (b.eval(x) <= 0)
        throw std::invalid_argument("birth rate not positive at x=" + std::to_string(x));
    for (long x = 1; x <= window; ++x)
      if (d.eval(x) <= 0)
        throw std::invalid_argument("death rate not positive at x=" + std::to_string(x));
  }
};

enum class BdRecurrence { Recurrent, Transient, Indeterminate };
enum class BdPositivity { Positive, Null, Indeterminate };

inline const char* to_string(BdRecurrence r) {
  switch (r) {
    case BdRecurrence::Recurrent: return "Recurrent";
    case BdRecurrence::Transient: return "Transient";
    default: return "Indeterminate";
  }
}
inline const char* to_string(BdPositivity p) {
  switch (p) {
    case BdPositivity::Positive: return "Positive";
    case BdPositivity::Null: return "Null";
    default: return "Indeterminate";
  }
}

namespace detail {

/// p(x + shift) in the monomial basis (binomial expansion, exact).
inline MonomialPoly shift_poly(const MonomialPoly& p, long shift) {
  if (p.is_zero() || shift == 0) return p;
  std::vector<Rat> out(p.coeffs.size(), Rat(0));
  for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
    // expand p_j (x + shift)^j
    Rat binom(1);
    Rat pw(1);  // shift^(j-k), built from the top
    std::vector<Rat> powers(j + 1);
    for (std::size_t k = 0; k <= j; ++k) {
      powers[j - k] = pw;
      pw *= Rat(shift);
    }
    for (std::size_t k = 0; k <= j; ++k) {
      out[k] += p.coeffs[j] * binom * powers[k];
      binom = binom * Rat(static_cast<long>(j - k)) / Rat(static_cast<long>(k + 1));
    }
  }
  return MonomialPoly(std::move(out));
}

/// The product prod_{y<=x} r(y) behaves like C x^{c1} when r -> 1 + c1/x.
/// Classifies sum_x prod_{y<=x} r(y): diverges iff the expansion of r gives
/// degree > 0, or degree 0 with r0 > 1, or r0 = 1 with c1 >= -1.
inline bool product_series_diverges(const SignedRationalFn& ratio) {
  if (ratio.is_zero()) throw std::domain_error("ratio is identically zero on a tail");
  LaurentExpansion e = ratio.laurent();
  if (e.R > 0) return true;
  if (e.R < 0) return false;
  if (e.a > 1) return true;
  if (e.a < 1) return false;
  return e.b >= -1;  // r = 1 + c1/x + O(1/x^2); boundary c1 = -1 diverges
}

}  // namespace detail

/// Recurrence iff sum_x prod_{y<=x} d(y)/b(y) diverges.
inline BdRecurrence karlin_recurrence(const BirthDeathModel& m) {
  if (m.d.is_zero() || m.b.is_zero())
    throw std::domain_error("birth-death ratio not expandable: zero rate on a tail");
  SignedRationalFn ratio{m.d.numerator_monomial() * m.b.denominator_monomial(),
                         m.d.denominator_monomial() * m.b.numerator_monomial()};
  return detail::product_series_diverges(ratio) ? BdRecurrence::Recurrent
                                                : BdRecurrence::Transient;
}

/// Given recurrence, positive recurrence iff the product-form measure
/// sum_x prod_{y=1..x} b(y-1)/d(y) is finite.
inline BdPositivity bd_positive_recurrence(const BirthDeathModel& m) {
  if (m.d.is_zero() || m.b.is_zero())
    throw std::domain_error("birth-death ratio not expandable: zero rate on a tail");
  MonomialPoly bnum = detail::shift_poly(m.b.numerator_monomial(), -1);
  MonomialPoly bden = detail::shift_poly(m.b.denominator_monomial(), -1);
  SignedRationalFn ratio{bnum * m.d.denominator_monomial(),
                         bden * m.d.numerator_monomial()};
  return detail::product_series_diverges(ratio) ? BdPositivity::Null
                                                : BdPositivity::Positive;
}

/// Product-form measure pi(x) ~ prod_{y=1..x} b(y-1)/d(y), exact rationals,
/// normalized over 0..N and converted to floats at the end.
inline Distribution bd_stationary(const BirthDeathModel& m, long n) {
  if (n < 1) throw std::invalid_argument("bd_stationary needs N >= 1");
  std::vector<Rat> w(static_cast<std::size_t>(n) + 1);
  w[0] = Rat(1);
  Rat total(1);
  for (long x = 1; x <= n; ++x) {
    Rat bx = m.b.eval(x - 1), dx = m.d.eval(x);
    if (dx <= 0) throw std::domain_error("death rate not positive at x=" + std::to_string(x));
    w[static_cast<std::size_t>(x)] = w[static_cast<std::size_t>(x - 1)] * bx / dx;
    total += w[static_cast<std::size_t>(x)];
  }
  std::vector<double> mass(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) mass[i] = to_double(w[i] / total);
  return Distribution(std::move(mass));
}

/// Numerical partial-sum fallback: floating partial sums of both series on
/// geometric checkpoints, with a crude increment-ratio divergence heuristic.
/// Diagnostic only; never a verdict.
struct BdSeriesDiagnostic {
  std::vector<std::pair<long, double>> karlin_partial;      // (x, partial sum)
  std::vector<std::pair<long, double>> stationary_partial;  // (x, partial sum)
  bool karlin_looks_divergent = false;
  bool stationary_looks_summable = false;
};

inline BdSeriesDiagnostic bd_series_diagnostic(const BirthDeathModel& m,
                                               long terms = 1'000'000) {
  BdSeriesDiagnostic out;
  double log_prod_k = 0, sum_k = 0;
  double log_prod_s = 0, sum_s = 1;  // x = 0 term of the measure
  long next_checkpoint = 1000;
  std::vector<double> k_checkpoints, s_checkpoints;
  for (long x = 1; x <= terms; ++x) {
    double bx = to_double(m.b.eval(x)), dx = to_double(m.d.eval(x));
    log_prod_k += std::log(dx) - std::log(bx);
    sum_k += std::exp(log_prod_k);
    double bprev = to_double(m.b.eval(x - 1));
    log_prod_s += std::log(bprev) - std::log(dx);
    sum_s += std::exp(log_prod_s);
    if (x == next_checkpoint || x == terms) {
      out.karlin_partial.emplace_back(x, sum_k);
      out.stationary_partial.emplace_back(x, sum_s);
      k_checkpoints.push_back(sum_k);
      s_checkpoints.push_back(sum_s);
      next_checkpoint *= 10;
    }
  }
  auto tail_still_growing = [](const std::vector<double>& s) {
    if (s.size() < 2) return false;
    double a = s[s.size() - 2], b = s.back();
    return (b - a) > 1e-6 * std::abs(b);
  };
  out.karlin_looks_divergent = tail_still_growing(k_checkpoints);
  out.stationary_looks_summable = !tail_still_growing(s_checkpoints);
  return out;
}

}  // namespace ctmc1d
