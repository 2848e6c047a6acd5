#pragma once

/**
 * @file model.hpp
 * @brief One-dimensional CTMC models on the non-negative integers: a finite
 *        jump set with one rational rate per jump size, plus constructors
 *        for mass-action, Michaelis-Menten, and Haldane kinetics.
 *
 * Boundary convention: for eta < 0 the effective rate at x < |eta| is zero.
 * The clamp is applied at evaluation time; stored rates stay canonical.
 */

#include "rate.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace ctmc1d {

struct JumpRate {
  int eta = 0;           // jump size, nonzero
  RationalRate rate;     // events per unit time as a function of state x
};

class CtmcModel {
 public:
  CtmcModel() = default;
  explicit CtmcModel(std::vector<JumpRate> jumps) {
    for (auto& j : jumps) add_jump(j.eta, j.rate);
  }

  /// Adds a jump; rates for an existing eta are summed, keeping the
  /// one-rate-per-eta invariant.
  void add_jump(int eta, const RationalRate& rate) {
    if (eta == 0) throw std::invalid_argument("jump size must be nonzero");
    auto it = std::find_if(jumps_.begin(), jumps_.end(),
                           [eta](const JumpRate& j) { return j.eta == eta; });
    if (it == jumps_.end()) {
      jumps_.push_back({eta, rate});
      std::sort(jumps_.begin(), jumps_.end(),
                [](const JumpRate& a, const JumpRate& b) { return a.eta < b.eta; });
    } else {
      SignedRationalFn sum = it->rate.as_signed() + rate.as_signed();
      it->rate = RationalRate::from_monomial(sum.num, sum.den);
    }
  }

  const std::vector<JumpRate>& jumps() const { return jumps_; }
  bool empty() const { return jumps_.empty(); }

  int max_abs_eta() const {
    int m = 0;
    for (const auto& j : jumps_) m = std::max(m, std::abs(j.eta));
    return m;
  }

  /// Rate of jump eta at state x with the boundary clamp applied.
  Rat effective_rate(long x, const JumpRate& j) const {
    if (j.eta < 0 && x < -static_cast<long>(j.eta)) return Rat(0);
    return j.rate.eval(x);
  }

 private:
  std::vector<JumpRate> jumps_;  // sorted by eta; this set is Gamma
};

struct ValidationOptions {
  long rate_window = 200;            // non-negativity probe 0..rate_window
  long irreducibility_window = 200;  // strong-connectivity probe 0..N_irr
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool rates_nonnegative = false;
  bool clamp_confirmed = false;
  bool irreducibility_probe_passed = false;
  long irreducibility_window = 0;
  bool ok() const { return errors.empty(); }
};

namespace detail {

/// Forward+backward reachability from state 0 over positive-rate edges.
inline bool strongly_connected_probe(const CtmcModel& m, long n) {
  auto reach = [&](bool forward) {
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    std::vector<long> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      long x = stack.back();
      stack.pop_back();
      for (const auto& j : m.jumps()) {
        long src = forward ? x : x - j.eta;
        long dst = src + j.eta;
        long y = forward ? dst : src;
        if (src < 0 || y < 0 || y > n || dst < 0 || dst > n) continue;
        if (seen[static_cast<std::size_t>(y)]) continue;
        if (m.effective_rate(src, j) > 0) {
          seen[static_cast<std::size_t>(y)] = 1;
          stack.push_back(y);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach(true) && reach(false);
}

}  // namespace detail

/// Checks Assumption-level sanity: finite nonempty jump set, finite
/// non-negative rates on a window, the boundary clamp, and a strong
/// connectivity probe (warning on failure, never a silent assumption).
inline ValidationReport validate(const CtmcModel& m, ValidationOptions opts = {}) {
  ValidationReport rep;
  rep.irreducibility_window = opts.irreducibility_window;
  if (m.empty()) {
    rep.errors.push_back("model has no jumps (Gamma must be finite and nonempty)");
    return rep;
  }

  bool any_zero_rate = false;
  rep.rates_nonnegative = true;
  for (const auto& j : m.jumps()) {
    if (j.rate.is_zero()) any_zero_rate = true;
    for (long x = 0; x <= opts.rate_window; ++x) {
      Rat r = j.rate.eval(x);
      if (r < 0) {
        rep.errors.push_back("negative rate at state x=" + std::to_string(x) +
                             " for jump eta=" + std::to_string(j.eta));
        rep.rates_nonnegative = false;
        break;
      }
    }
  }

  // Boundary clamp: effective rate is exactly zero below |eta|.
  rep.clamp_confirmed = true;
  for (const auto& j : m.jumps())
    if (j.eta < 0)
      for (long x = 0; x < -static_cast<long>(j.eta); ++x)
        if (m.effective_rate(x, j) != 0) rep.clamp_confirmed = false;

  rep.irreducibility_probe_passed =
      detail::strongly_connected_probe(m, opts.irreducibility_window);
  if (!rep.irreducibility_probe_passed) {
    if (any_zero_rate)
      rep.errors.push_back(
          "identically-zero rate disconnects the transition graph on the probe window");
    else
      rep.warnings.push_back(
          "transition graph on 0.." + std::to_string(opts.irreducibility_window) +
          " is not strongly connected; irreducibility not established");
  }
  return rep;
}

inline void validate_or_throw(const CtmcModel& m, ValidationOptions opts = {}) {
  ValidationReport rep = validate(m, opts);
  if (!rep.ok()) throw std::invalid_argument("invalid model: " + rep.errors.front());
}

/// One-species reaction nu A -> nu' A with rate constant kappa > 0.
struct ReactionSpec {
  unsigned nu = 0;       // reactant stoichiometry
  unsigned nu_prime = 0; // product stoichiometry
  Rat kappa = Rat(1);

  ReactionSpec(unsigned reactant, unsigned product, Rat rate_constant)
      : nu(reactant), nu_prime(product), kappa(std::move(rate_constant)) {
    if (nu == nu_prime) throw std::invalid_argument("trivial reaction (nu' = nu)");
    if (kappa <= 0) throw std::invalid_argument("rate constant must be positive");
  }
};

/// Mass-action kinetics: eta = nu' - nu, rate kappa * x^(nu).
inline JumpRate mass_action_rate(const ReactionSpec& spec) {
  int eta = static_cast<int>(spec.nu_prime) - static_cast<int>(spec.nu);
  return {eta, RationalRate::falling_monomial(spec.kappa, spec.nu)};
}

namespace detail {

inline JumpRate saturating_rate(unsigned n, const Rat& V, const Rat& K, int c,
                                unsigned den_terms) {
  if (n == 0) throw std::invalid_argument("saturating kinetics need n >= 1");
  if (V <= 0 || K <= 0) throw std::invalid_argument("V and K must be positive");
  if (c == 0) throw std::invalid_argument("jump size must be nonzero");
  // Clear (x/K)^j denominators: numerator V K^(den_terms-1) x^n,
  // denominator sum_{j=0}^{den_terms-1} K^(den_terms-1-j) x^j (monic).
  unsigned top = den_terms - 1;
  Rat Kpow(1);
  std::vector<Rat> den(top + 1, Rat(0));
  for (unsigned j = 0; j <= top; ++j) {
    den[top - j] = Kpow;
    Kpow *= K;
  }
  std::vector<Rat> num(n + 1, Rat(0));
  num[n] = V * Kpow / K;  // V * K^top
  return {c, RationalRate::from_monomial(MonomialPoly(std::move(num)),
                                         MonomialPoly(std::move(den)))};
}

}  // namespace detail

/// Michaelis-Menten kinetics V x^n / sum_{j=0}^{n} (x/K)^j for the signed
/// jump c (negative for consumption, positive for production).
inline JumpRate mm_rate(unsigned n, const Rat& V, const Rat& K, int c) {
  return detail::saturating_rate(n, V, K, c, n + 1);
}

/// Haldane (substrate inhibition) kinetics: denominator runs j = 0..n+1.
inline JumpRate haldane_rate(unsigned n, const Rat& V, const Rat& K, int c) {
  return detail::saturating_rate(n, V, K, c, n + 2);
}

/// Birth-death network from one consuming and one producing jump.
inline CtmcModel bd_network(const JumpRate& death, const JumpRate& birth) {
  if (death.eta >= 0 || birth.eta <= 0)
    throw std::invalid_argument("bd_network needs one eta<0 and one eta>0 jump");
  CtmcModel m;
  m.add_jump(death.eta, death.rate);
  m.add_jump(birth.eta, birth.rate);
  return m;
}

// --- JSON model files ------------------------------------------------------
//
// {"jumps":[{"eta":-1,"numerator":["0","6","2"],"denominator":["1","0","1"],
//            "basis":"falling"}]}
// Numerators/denominators are arrays of exact rational strings; basis may be
// "falling" (default) or "monomial". Files round-trip exactly (canonical
// falling form is emitted).

inline nlohmann::json to_json(const CtmcModel& m) {
  nlohmann::json jumps = nlohmann::json::array();
  for (const auto& j : m.jumps()) {
    nlohmann::json num = nlohmann::json::array(), den = nlohmann::json::array();
    for (const auto& c : j.rate.numerator().coeffs) num.push_back(rat_str(c));
    for (const auto& c : j.rate.denominator().coeffs) den.push_back(rat_str(c));
    jumps.push_back({{"eta", j.eta},
                     {"numerator", num},
                     {"denominator", den},
                     {"basis", "falling"}});
  }
  return {{"jumps", jumps}};
}

inline std::vector<Rat> parse_rat_array(const nlohmann::json& arr) {
  std::vector<Rat> out;
  for (const auto& v : arr) {
    if (v.is_string())
      out.push_back(parse_rat(v.get<std::string>()));
    else if (v.is_number_integer())
      out.push_back(Rat(v.get<long>()));
    else
      throw std::invalid_argument("rational entries must be strings or integers");
  }
  return out;
}

/// Loads a model, deferring the numerator sign audit to validate() so a bad
/// file produces a named validation error rather than a parse failure.
inline CtmcModel model_from_json(const nlohmann::json& j) {
  if (!j.contains("jumps") || !j["jumps"].is_array() || j["jumps"].empty())
    throw std::invalid_argument("model file needs a nonempty 'jumps' array");
  CtmcModel m;
  for (const auto& je : j["jumps"]) {
    int eta = je.at("eta").get<int>();
    std::vector<Rat> num = parse_rat_array(je.at("numerator"));
    std::vector<Rat> den = je.contains("denominator")
                               ? parse_rat_array(je.at("denominator"))
                               : std::vector<Rat>{Rat(1)};
    std::string basis = je.value("basis", "falling");
    if (basis != "falling" && basis != "monomial")
      throw std::invalid_argument("unknown basis '" + basis + "' (falling|monomial)");
    RateCheckOptions opts;
    opts.check_numerator_nonneg = false;
    RationalRate rate = basis == "monomial"
                            ? RationalRate::from_monomial(MonomialPoly(num), MonomialPoly(den), opts)
                            : RationalRate(FallingPoly(num), FallingPoly(den), opts);
    m.add_jump(eta, rate);
  }
  return m;
}

inline CtmcModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

inline void save_model(const CtmcModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << to_json(m).dump(2) << "\n";
}

}  // namespace ctmc1d
