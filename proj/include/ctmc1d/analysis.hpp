#pragma once

/**
 * @file analysis.hpp
 * @brief Drift mean m(x), variance v(x), the Laurent indices (alpha, gamma,
 *        theta, R), the diagnostic functions H_p and J, and the generator
 *        applied to probe functions.
 *
 * All rate algebra is exact; floating point enters only in the final H_p/J
 * and generator evaluations (one transcendental log), which serve as
 * diagnostics. Classification never consumes these floats.
 */

#include "model.hpp"

#include <cmath>
#include <vector>

namespace ctmc1d {

/// m(x) = sum eta lambda_eta(x), v(x) = (1/2) sum eta^2 lambda_eta(x).
/// m is kept as a difference of two non-negative rate terms; evaluation is
/// per-jump so boundary clamps are honored exactly.
struct MomentFns {
  RationalRate m_plus;   // sum over eta>0 of eta * lambda_eta
  RationalRate m_minus;  // sum over eta<0 of |eta| * lambda_eta
  RationalRate v;        // (1/2) sum eta^2 lambda_eta
  CtmcModel model;

  Rat eval_m(long x) const {
    Rat acc(0);
    for (const auto& j : model.jumps())
      acc += Rat(j.eta) * model.effective_rate(x, j);
    return acc;
  }
  Rat eval_v(long x) const {
    Rat acc(0);
    for (const auto& j : model.jumps())
      acc += Rat(j.eta) * Rat(j.eta) * model.effective_rate(x, j);
    return acc / 2;
  }
};

inline MomentFns moments(const CtmcModel& m) {
  if (m.empty()) throw std::invalid_argument("moments of an empty model");
  SignedRationalFn mp, mm, vv;
  for (const auto& j : m.jumps()) {
    SignedRationalFn lam = j.rate.as_signed();
    if (j.eta > 0) mp = mp + Rat(j.eta) * lam;
    if (j.eta < 0) mm = mm + Rat(-j.eta) * lam;
    vv = vv + (Rat(j.eta) * Rat(j.eta) / 2) * lam;
  }
  return {RationalRate::from_monomial(mp.num, mp.den),
          RationalRate::from_monomial(mm.num, mm.den),
          RationalRate::from_monomial(vv.num, vv.den), m};
}

/// Signed asymptotic forms of m and v (clamps affect only finitely many
/// states, so these carry the tail behavior).
struct DriftFns {
  SignedRationalFn m;
  SignedRationalFn v;
  SignedRationalFn mxv;  // m(x) * x - v(x)
};

inline DriftFns drift_functions(const CtmcModel& model) {
  SignedRationalFn m, v;
  for (const auto& j : model.jumps()) {
    SignedRationalFn lam = j.rate.as_signed();
    m = m + Rat(j.eta) * lam;
    v = v + (Rat(j.eta) * Rat(j.eta) / 2) * lam;
  }
  SignedRationalFn mxv = MonomialPoly({Rat(0), Rat(1)}) * m - v;
  return {m, v, mxv};
}

/// The classifier input: m(x) = alpha x^R + gamma x^{R-1} + O(x^{R-2}) and
/// v(x) = theta x^R + O(x^{R-1}), with R the maximal per-jump degree.
struct LaurentIndices {
  long R = 0;
  Rat alpha;
  Rat gamma;
  Rat theta;  // > 0
  std::vector<std::pair<int, LaurentExpansion>> per_jump;
};

/// Aligns per-jump expansions to the common maximal degree: a jump of degree
/// R-1 contributes its leading coefficient at the b level only.
inline LaurentIndices indices(const CtmcModel& m) {
  if (m.empty()) throw std::invalid_argument("indices of an empty model");
  std::vector<std::pair<int, LaurentExpansion>> per;
  bool any = false;
  long R = 0;
  for (const auto& j : m.jumps()) {
    LaurentExpansion e = laurent_expand(j.rate);
    if (!e.is_zero) {
      R = any ? std::max(R, e.R) : e.R;
      any = true;
    }
    per.emplace_back(j.eta, e);
  }
  if (!any) throw std::invalid_argument("all rates are identically zero");

  LaurentIndices ix;
  ix.R = R;
  ix.alpha = ix.gamma = ix.theta = Rat(0);
  for (const auto& [eta, e] : per) {
    if (e.is_zero) continue;
    Rat a(0), b(0);
    if (e.R == R) {
      a = e.a;
      b = e.b;
    } else if (e.R == R - 1) {
      b = e.a;
    }
    ix.alpha += Rat(eta) * a;
    ix.gamma += Rat(eta) * b;
    ix.theta += Rat(eta) * Rat(eta) * a / 2;
  }
  ix.per_jump = std::move(per);
  if (ix.theta <= 0)
    throw std::domain_error("theta <= 0: no positive leading coefficient at the maximal degree");
  return ix;
}

/// H_p(x) = (log x)(m(x)x - p v(x)) / v(x); requires v(x) > 0 and x >= 2.
inline double hp(const MomentFns& fns, double p, long x) {
  if (x < 2) throw std::invalid_argument("H_p needs x >= 2");
  Rat vx = fns.eval_v(x);
  if (vx == 0) throw std::domain_error("H_p undefined: v(x) = 0");
  Rat mx_x = fns.eval_m(x) * Rat(x);
  return std::log(static_cast<double>(x)) *
         (to_double(mx_x) - p * to_double(vx)) / to_double(vx);
}

inline double hp(const CtmcModel& m, double p, long x) { return hp(moments(m), p, x); }

/// J(x) = m(x) x / v(x).
inline double jfun(const MomentFns& fns, long x) {
  Rat vx = fns.eval_v(x);
  if (vx == 0) throw std::domain_error("J undefined: v(x) = 0");
  return to_double(fns.eval_m(x) * Rat(x)) / to_double(vx);
}

/// Lyapunov probe families: f(x) = x^p (log x)^q for x > 1 (and 1 for
/// x <= 1), or f(x) = exp(p x). Both are strictly positive on Z_{>=0}.
struct GeneratorProbe {
  enum class Kind { PowerLog, Exponential };
  Kind kind = Kind::PowerLog;
  double p = 1.0;
  double q = 0.0;

  static GeneratorProbe power_log(double p, double q) {
    return {Kind::PowerLog, p, q};
  }
  static GeneratorProbe exponential(double p) { return {Kind::Exponential, p, 0.0}; }

  double operator()(long x) const {
    if (kind == Kind::Exponential) return std::exp(p * static_cast<double>(x));
    if (x <= 1) return 1.0;
    double lx = std::log(static_cast<double>(x));
    return std::pow(static_cast<double>(x), p) * std::pow(lx, q);
  }
};

/// A f(x) = sum_eta lambda_eta(x) (f(x+eta) - f(x)), rates evaluated exactly
/// then converted.
inline double apply_generator(const CtmcModel& m, const GeneratorProbe& f, long x) {
  if (x < 0) throw std::invalid_argument("apply_generator needs x >= 0");
  double acc = 0;
  for (const auto& j : m.jumps()) {
    double lam = to_double(m.effective_rate(x, j));
    if (lam != 0) acc += lam * (f(x + j.eta) - f(x));
  }
  return acc;
}

struct ResidualRow {
  long x = 0;
  double generator = 0;   // A f(x), direct summation
  double prediction = 0;  // two-term expansion
  double ratio = 0;       // generator / prediction
};

/// Compares A f against the two-term generator expansion on a grid. For
/// power-log probes the prediction is
///   p x^{p-2}(log x)^q {m x + (p-1) v}
///   + q x^{p-2}(log x)^{q-1} {m x + (2p-1) v + (q-1) v / log x},
/// for exponential probes e^{px}{p m + p^2 v}.
inline std::vector<ResidualRow> expansion_residual(const CtmcModel& m,
                                                   const GeneratorProbe& probe,
                                                   const std::vector<long>& grid) {
  MomentFns fns = moments(m);
  std::vector<ResidualRow> rows;
  rows.reserve(grid.size());
  for (long x : grid) {
    double mx = to_double(fns.eval_m(x));
    double vx = to_double(fns.eval_v(x));
    double pred;
    if (probe.kind == GeneratorProbe::Kind::Exponential) {
      pred = std::exp(probe.p * static_cast<double>(x)) *
             (probe.p * mx + probe.p * probe.p * vx);
    } else {
      double xd = static_cast<double>(x);
      double lx = std::log(xd);
      double scale = std::pow(xd, probe.p - 2.0);
      double pterm = probe.p * scale * std::pow(lx, probe.q) *
                     (mx * xd + (probe.p - 1.0) * vx);
      double qterm = probe.q * scale * std::pow(lx, probe.q - 1.0) *
                     (mx * xd + (2.0 * probe.p - 1.0) * vx + (probe.q - 1.0) * vx / lx);
      pred = pterm + qterm;
    }
    double af = apply_generator(m, probe, x);
    rows.push_back({x, af, pred, pred != 0 ? af / pred : std::nan("")});
  }
  return rows;
}

}  // namespace ctmc1d
