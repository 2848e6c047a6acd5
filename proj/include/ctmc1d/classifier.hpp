#pragma once

/**
 * @file classifier.hpp
 * @brief Maps Laurent indices (alpha, gamma, theta, R) to a dynamics verdict.
 *
 * For R <= 0 the five-way complete classification applies (non-explosive
 * always; transient / null recurrent / positive+non-exponential /
 * positive+exponential partition the index space). For R >= 1 the general
 * sufficient-criteria engine runs, instantiated with Laurent asymptotics,
 * plus the R=2 exponential-ergodicity case; undecided fields stay Unresolved
 * rather than importing results from prior work.
 *
 * All comparisons are exact rational comparisons; no epsilon thresholds.
 */

#include "analysis.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ctmc1d {

enum class Explosivity { Explosive, NonExplosive, Unresolved };
enum class Recurrence { Transient, NullRecurrent, PositiveRecurrent, Unresolved };
enum class ErgodicitySpeed { Exponential, NonExponential, NotApplicable, Unresolved };

inline const char* to_string(Explosivity e) {
  switch (e) {
    case Explosivity::Explosive: return "Explosive";
    case Explosivity::NonExplosive: return "NonExplosive";
    default: return "Unresolved";
  }
}
inline const char* to_string(Recurrence r) {
  switch (r) {
    case Recurrence::Transient: return "Transient";
    case Recurrence::NullRecurrent: return "NullRecurrent";
    case Recurrence::PositiveRecurrent: return "PositiveRecurrent";
    default: return "Unresolved";
  }
}
inline const char* to_string(ErgodicitySpeed s) {
  switch (s) {
    case ErgodicitySpeed::Exponential: return "Exponential";
    case ErgodicitySpeed::NonExponential: return "NonExponential";
    case ErgodicitySpeed::NotApplicable: return "NotApplicable";
    default: return "Unresolved";
  }
}

struct CriterionResult {
  std::string id;
  bool fired = false;
};

struct Verdict {
  Explosivity explosivity = Explosivity::Unresolved;
  Recurrence recurrence = Recurrence::Unresolved;
  ErgodicitySpeed ergodicity_speed = ErgodicitySpeed::NotApplicable;
  std::vector<CriterionResult> provenance;
  std::vector<std::string> notes;

  bool unresolved() const {
    return explosivity == Explosivity::Unresolved ||
           recurrence == Recurrence::Unresolved ||
           ergodicity_speed == ErgodicitySpeed::Unresolved;
  }
  bool fired(const std::string& id) const {
    for (const auto& c : provenance)
      if (c.id == id && c.fired) return true;
    return false;
  }
};

/// Symbolic asymptotic data for the general-criteria engine: the indices
/// plus, when available, the exact leading term of m(x)x - v(x) (needed by
/// the explosivity items when alpha = 0 and gamma = theta leave it
/// undetermined at index level).
struct AsymptoticSummary {
  long R = 0;
  Rat alpha;
  Rat gamma;
  Rat theta;           // > 0
  bool mxv_known = false;   // leading term of m(x)x - v(x) certified
  bool mxv_is_zero = false; // m(x)x - v(x) identically zero
  long mxv_degree = 0;      // valid when known and not zero
  Rat mxv_lead;

  static AsymptoticSummary from_indices(const LaurentIndices& ix) {
    AsymptoticSummary s;
    s.R = ix.R;
    s.alpha = ix.alpha;
    s.gamma = ix.gamma;
    s.theta = ix.theta;
    // m(x)x - v(x) = alpha x^{R+1} + (gamma - theta) x^R + O(x^{R-1})
    if (ix.alpha != 0) {
      s.mxv_known = true;
      s.mxv_degree = ix.R + 1;
      s.mxv_lead = ix.alpha;
    } else if (ix.gamma != ix.theta) {
      s.mxv_known = true;
      s.mxv_degree = ix.R;
      s.mxv_lead = ix.gamma - ix.theta;
    }
    return s;
  }

  static AsymptoticSummary from_model(const CtmcModel& m) {
    AsymptoticSummary s = from_indices(indices(m));
    if (!s.mxv_known) {
      DriftFns d = drift_functions(m);
      s.mxv_known = true;
      if (d.mxv.is_zero()) {
        s.mxv_is_zero = true;
      } else {
        s.mxv_degree = *d.mxv.degree();
        s.mxv_lead = d.mxv.lead();
      }
    }
    return s;
  }
};

namespace detail {

enum class H1Limit { MinusInf, Zero, PlusInf };

// lim H_1(x) under the Laurent expansion: +infinity exactly when the drift
// dominates upward (alpha > 0, or alpha = 0 with gamma > theta).
inline H1Limit h1_limit(const AsymptoticSummary& s) {
  if (s.alpha > 0 || (s.alpha == 0 && s.gamma > s.theta)) return H1Limit::PlusInf;
  if (s.alpha == 0 && s.gamma == s.theta) return H1Limit::Zero;
  return H1Limit::MinusInf;
}

}  // namespace detail

/// Evaluates the general sufficient criteria (items 1-8) on symbolic
/// asymptotics, with c = R in items 5(a) and 6. Returns every criterion with
/// its fired flag; callers assemble verdicts, honoring the recurrence /
/// positive-recurrence preconditions of items 6-8.
inline std::vector<CriterionResult> check_general(const AsymptoticSummary& s) {
  if (s.theta <= 0) throw std::domain_error("check_general requires theta > 0");
  using detail::H1Limit;
  H1Limit h1 = detail::h1_limit(s);
  const bool h1_below_1 = (h1 != H1Limit::PlusInf);   // limsup H1 < 1
  const bool h1_above_1 = (h1 == H1Limit::PlusInf);   // liminf H1 > 1
  const bool j_finite = (s.alpha == 0);               // lim J = gamma/theta

  std::vector<CriterionResult> out;
  auto add = [&out](const char* id, bool fired) { out.push_back({id, fired}); };

  // Upper bound on deg(m x - v) certified by the indices alone.
  long mxv_deg_upper = s.mxv_known ? (s.mxv_is_zero ? -1 : s.mxv_degree) : s.R - 1;

  // 1: explosive. (c) holds automatically for Laurent rates: v/x^2(log x)^q
  // always has a limit.
  bool item1 = s.mxv_known && !s.mxv_is_zero && s.mxv_degree > 2 && s.mxv_lead > 0 &&
               h1_above_1;
  add("Thm4.1-1", item1);

  // 2: non-explosive, both routes.
  bool item2a = s.R <= 2 &&
                (s.mxv_is_zero || mxv_deg_upper <= 2 ||
                 (s.mxv_known && !s.mxv_is_zero && s.mxv_lead < 0));
  bool item2b = h1_below_1;
  add("Thm4.1-2a", item2a);
  add("Thm4.1-2b", item2b);

  // 3/4: transience and recurrence from the H1 limit.
  add("Thm4.1-3", h1_above_1);
  add("Thm4.1-4", h1_below_1);

  // 5: positive recurrence. (a) with c = R (needs c <= 2); (b) needs c > 2.
  bool item5a = s.R <= 2 &&
                (s.alpha < 0 || (s.alpha == 0 && s.gamma < Rat(s.R - 1) * s.theta));
  bool item5b = s.R >= 3 && h1_below_1;
  add("Thm4.1-5a", item5a);
  add("Thm4.1-5b", item5b);

  // 6: null recurrence (given recurrence), with c = R; v <~ x^R needs R <= 2.
  bool item6a = s.R <= 2 && j_finite && s.gamma > Rat(s.R - 1) * s.theta;
  bool item6b = s.R <= 2 && j_finite && s.gamma == Rat(s.R - 1) * s.theta;
  add("Thm4.1-6a", item6a);
  add("Thm4.1-6b", item6b);

  // 7: exponential ergodicity (given positive recurrence).
  add("Thm4.1-7a", s.R >= 3 && h1_below_1);
  add("Thm4.1-7b", s.R == 2 && (s.alpha < 0 || (s.alpha == 0 && s.gamma < s.theta)));
  add("Thm4.1-7c", s.R >= 0 && s.alpha < 0);

  // 8: non-exponential ergodicity (given positive recurrence).
  add("Thm4.1-8a", s.R <= 1 && j_finite);
  add("Thm4.1-8b", s.R <= -1);

  return out;
}

namespace detail {

inline bool fired_in(const std::vector<CriterionResult>& v, const std::string& id) {
  for (const auto& c : v)
    if (c.id == id && c.fired) return true;
  return false;
}

/// Assembles a verdict from the general engine + the R=2 special case.
inline Verdict assemble_general(const AsymptoticSummary& s) {
  Verdict v;
  v.provenance = check_general(s);
  bool prop61 = s.R == 2 && s.alpha == 0 && s.gamma < s.theta;
  v.provenance.push_back({"Prop6.1", prop61});

  bool f1 = fired_in(v.provenance, "Thm4.1-1");
  bool f2 = fired_in(v.provenance, "Thm4.1-2a") || fired_in(v.provenance, "Thm4.1-2b");
  if (f1 && f2) throw std::logic_error("criteria engine fired explosive and non-explosive");
  v.explosivity = f1   ? Explosivity::Explosive
                  : f2 ? Explosivity::NonExplosive
                       : Explosivity::Unresolved;

  bool transient = fired_in(v.provenance, "Thm4.1-3");
  bool recurrent = fired_in(v.provenance, "Thm4.1-4");
  bool positive =
      fired_in(v.provenance, "Thm4.1-5a") || fired_in(v.provenance, "Thm4.1-5b");
  bool null_rec = recurrent && (fired_in(v.provenance, "Thm4.1-6a") ||
                                fired_in(v.provenance, "Thm4.1-6b"));
  if (positive && null_rec)
    throw std::logic_error("criteria engine fired positive and null recurrence");
  if (transient)
    v.recurrence = Recurrence::Transient;
  else if (positive)
    v.recurrence = Recurrence::PositiveRecurrent;
  else if (null_rec)
    v.recurrence = Recurrence::NullRecurrent;
  else {
    v.recurrence = Recurrence::Unresolved;
    if (recurrent)
      v.notes.push_back("recurrent (Thm4.1-4) but neither positive nor null recurrence decided");
  }

  if (v.recurrence == Recurrence::PositiveRecurrent) {
    bool expo = prop61 || fired_in(v.provenance, "Thm4.1-7a") ||
                fired_in(v.provenance, "Thm4.1-7b") || fired_in(v.provenance, "Thm4.1-7c");
    bool nonexpo =
        fired_in(v.provenance, "Thm4.1-8a") || fired_in(v.provenance, "Thm4.1-8b");
    if (expo && nonexpo)
      throw std::logic_error("criteria engine fired exponential and non-exponential");
    v.ergodicity_speed = expo      ? ErgodicitySpeed::Exponential
                         : nonexpo ? ErgodicitySpeed::NonExponential
                                   : ErgodicitySpeed::Unresolved;
  } else {
    v.ergodicity_speed = ErgodicitySpeed::NotApplicable;
  }
  if (v.unresolved())
    v.notes.push_back(
        "R >= 1 region not fully decided by the built-in criteria; no external results "
        "are imported");
  return v;
}

inline Verdict classify_summary(const AsymptoticSummary& s) {
  if (s.theta <= 0) throw std::domain_error("classification requires theta > 0");
  if (s.R >= 1) return assemble_general(s);

  // Complete classification for R <= 0: exactly one case fires.
  Verdict v;
  v.explosivity = Explosivity::NonExplosive;
  v.provenance.push_back({"Thm5.1-nonexplosive", true});
  Rat lower = Rat(s.R - 1) * s.theta;
  bool c1 = s.alpha > 0 || (s.alpha == 0 && s.gamma > s.theta);
  bool c2 = s.alpha == 0 && lower <= s.gamma && s.gamma <= s.theta;
  bool c3 = (s.alpha == 0 && s.gamma < lower) || (s.alpha < 0 && s.R < 0);
  bool c4 = s.alpha < 0 && s.R == 0;
  v.provenance.push_back({"Thm5.1-i", c1});
  v.provenance.push_back({"Thm5.1-ii", c2});
  v.provenance.push_back({"Thm5.1-iii", c3});
  v.provenance.push_back({"Thm5.1-iv", c4});
  if (int(c1) + int(c2) + int(c3) + int(c4) != 1)
    throw std::logic_error("R <= 0 cases failed to partition the index space");
  if (c1) {
    v.recurrence = Recurrence::Transient;
    v.ergodicity_speed = ErgodicitySpeed::NotApplicable;
  } else if (c2) {
    v.recurrence = Recurrence::NullRecurrent;
    v.ergodicity_speed = ErgodicitySpeed::NotApplicable;
  } else if (c3) {
    v.recurrence = Recurrence::PositiveRecurrent;
    v.ergodicity_speed = ErgodicitySpeed::NonExponential;
  } else {
    v.recurrence = Recurrence::PositiveRecurrent;
    v.ergodicity_speed = ErgodicitySpeed::Exponential;
  }
  return v;
}

}  // namespace detail

/// Classification from the indices alone (complete for R <= 0; sufficient
/// criteria plus the R=2 case for R >= 1).
inline Verdict classify_laurent(const LaurentIndices& ix) {
  return detail::classify_summary(AsymptoticSummary::from_indices(ix));
}

/// True when every rate has the single-term mass-action form kappa x^(nu).
inline bool is_mass_action(const CtmcModel& m) {
  for (const auto& j : m.jumps()) {
    if (j.rate.denominator().degree() != 0) return false;
    const auto& s = j.rate.numerator().coeffs;
    long nonzero = 0;
    for (const auto& c : s)
      if (c != 0) ++nonzero;
    if (nonzero != 1 || s.back() <= 0) return false;
  }
  return true;
}

/// Full pipeline: validate, extract indices (with the exact leading term of
/// m(x)x - v(x) from the rational forms), classify, and attach the
/// single-species mass-action corollary where it applies.
inline Verdict classify_model(const CtmcModel& m, ValidationOptions vopts = {}) {
  ValidationReport rep = validate(m, vopts);
  if (!rep.ok()) throw std::invalid_argument("invalid model: " + rep.errors.front());
  Verdict v = detail::classify_summary(AsymptoticSummary::from_model(m));
  for (const auto& w : rep.warnings) v.notes.push_back("validation: " + w);
  if (is_mass_action(m) && v.recurrence == Recurrence::PositiveRecurrent) {
    v.provenance.push_back({"Cor6.1", true});
    v.notes.push_back(
        "single-species mass-action network: ergodic implies exponentially ergodic");
    v.ergodicity_speed = ErgodicitySpeed::Exponential;
  }
  return v;
}

}  // namespace ctmc1d
