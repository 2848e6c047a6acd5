#pragma once

/**
 * @file reduction.hpp
 * @brief Two-species fast/slow networks, the quasi-steady-state reduction to
 *        a 1-D model with rational rates, and full-vs-reduced comparisons.
 *
 * The fast tier evolves species Y only, catalyzed by X; the slow tier evolves
 * X only, with at most linear Y catalysis. Replacing the scaled fast species
 * by its quasi-steady value V g(x), g = f1/f2, turns each Y-catalyzed slow
 * reaction with mass-action rate kappa x^(nu1) y into the rational rate
 * kappa V g(x) x^(nu1).
 */

#include "model.hpp"
#include "ssa.hpp"

#include <array>
#include <fstream>
#include <thread>
#include <vector>

namespace ctmc1d {

enum class Tier { Fast, Slow };

struct Reaction2 {
  std::array<unsigned, 2> reactants{};  // (X, Y) stoichiometry
  std::array<unsigned, 2> products{};
  Rat kappa = Rat(1);
  Tier tier = Tier::Slow;

  int eta_x() const { return static_cast<int>(products[0]) - static_cast<int>(reactants[0]); }
  int eta_y() const { return static_cast<int>(products[1]) - static_cast<int>(reactants[1]); }
};

struct TwoSpeciesNetwork {
  std::vector<Reaction2> reactions;
  Rat U = Rat(1);  // fast-tier acceleration
  Rat V = Rat(1);  // system volume
};

/// Quasi-steady map g = f1/f2 with f2 > 0 and f1 >= 0 on the window.
struct QssMap {
  FallingPoly f1;
  FallingPoly f2;

  QssMap(FallingPoly f1_, FallingPoly f2_, long window = 200)
      : f1(std::move(f1_)), f2(std::move(f2_)) {
    for (long x = 0; x <= window; ++x) {
      if (f2.eval(x) <= 0)
        throw std::invalid_argument("f2 not positive at x=" + std::to_string(x));
      if (f1.eval(x) < 0)
        throw std::invalid_argument("f1 negative at x=" + std::to_string(x));
    }
  }

  RationalRate g() const { return RationalRate(f1, f2); }
};

inline void validate_network(const TwoSpeciesNetwork& n) {
  if (n.U <= 0 || n.V <= 0) throw std::invalid_argument("scaling U, V must be positive");
  for (const auto& r : n.reactions) {
    if (r.kappa <= 0) throw std::invalid_argument("rate constants must be positive");
    if (r.tier == Tier::Fast && r.eta_x() != 0)
      throw std::invalid_argument("fast reactions must be catalyzed by X (eta_X = 0)");
    if (r.tier == Tier::Slow && r.eta_y() != 0)
      throw std::invalid_argument("slow reactions must leave Y unchanged (eta_Y = 0)");
    if (r.eta_x() == 0 && r.eta_y() == 0)
      throw std::invalid_argument("trivial reaction (no net change)");
  }
}

/// Fast-tier construction for a given map g = f1/f2: the Y birth/death
/// families iX+Y -> iX+2Y | iX (rate |s_i| U) and jX+2Y -> jX+Y | jX+3Y
/// (rate |r_j| U/V), with production/degradation chosen so the scaled
/// Y-drift is U y (f1(x) - f2(x) y), whose stable root is g(x).
inline TwoSpeciesNetwork build_fast_network(const QssMap& q, const Rat& U, const Rat& V) {
  TwoSpeciesNetwork n;
  n.U = U;
  n.V = V;
  for (std::size_t i = 0; i < q.f1.coeffs.size(); ++i) {
    const Rat& s = q.f1.coeffs[i];
    if (s == 0) continue;
    Reaction2 r;
    r.reactants = {static_cast<unsigned>(i), 1};
    r.products = {static_cast<unsigned>(i), s > 0 ? 2u : 0u};
    r.kappa = abs(s) * U;
    r.tier = Tier::Fast;
    n.reactions.push_back(r);
  }
  for (std::size_t j = 0; j < q.f2.coeffs.size(); ++j) {
    const Rat& r2 = q.f2.coeffs[j];
    if (r2 == 0) continue;
    Reaction2 r;
    r.reactants = {static_cast<unsigned>(j), 2};
    r.products = {static_cast<unsigned>(j), r2 > 0 ? 1u : 3u};
    r.kappa = abs(r2) * U / V;
    r.tier = Tier::Fast;
    n.reactions.push_back(r);
  }
  validate_network(n);
  return n;
}

/// Mean Y-drift of the fast tier at (x, y), exact (y may be rational, e.g.
/// the candidate quasi-steady value V g(x)).
inline Rat fast_y_drift(const TwoSpeciesNetwork& n, long x, const Rat& y) {
  auto ff_rat = [](const Rat& z, unsigned k) {
    Rat acc(1);
    for (unsigned i = 0; i < k; ++i) acc *= z - Rat(static_cast<long>(i));
    return acc;
  };
  Rat acc(0);
  for (const auto& r : n.reactions) {
    if (r.tier != Tier::Fast) continue;
    Rat rate = r.kappa * Rat(falling_factorial(Int(x), r.reactants[0])) *
               ff_rat(y, r.reactants[1]);
    acc += Rat(r.eta_y()) * rate;
  }
  return acc;
}

/// QSS substitution y -> V g(x) on the slow tier. Reactions without Y
/// catalysis pass through unchanged; nonlinear Y catalysis is unsupported
/// (it would need moments of Y the reduction does not define).
inline CtmcModel reduce(const TwoSpeciesNetwork& n, const QssMap& q) {
  validate_network(n);
  MonomialPoly f1 = to_monomial(q.f1);
  MonomialPoly f2 = to_monomial(q.f2);
  CtmcModel m;
  bool any_slow = false;
  for (const auto& r : n.reactions) {
    if (r.tier != Tier::Slow) continue;
    any_slow = true;
    unsigned nu2 = r.reactants[1];
    if (nu2 >= 2)
      throw std::invalid_argument("nonlinear Y catalysis (nu2 >= 2) is unsupported");
    MonomialPoly xpart = to_monomial(FallingPoly::monomial_falling(r.kappa, r.reactants[0]));
    if (nu2 == 0) {
      m.add_jump(r.eta_x(), RationalRate::from_monomial(xpart, MonomialPoly({Rat(1)})));
    } else {
      m.add_jump(r.eta_x(),
                 RationalRate::from_monomial(n.V * (xpart * f1), f2));
    }
  }
  if (!any_slow) throw std::invalid_argument("network has no slow reactions to reduce");
  return m;
}

/// Warnings when the declared QSS map is inconsistent with the fast tier
/// (the Y-drift at y = V g(x) should be o(V); checked on small states).
inline std::vector<std::string> qss_consistency_warnings(const TwoSpeciesNetwork& n,
                                                         const QssMap& q,
                                                         long window = 10) {
  auto ff_rat = [](const Rat& z, unsigned k) {
    Rat acc(1);
    for (unsigned i = 0; i < k; ++i) acc *= z - Rat(static_cast<long>(i));
    return acc;
  };
  std::vector<std::string> warnings;
  for (long x = 0; x <= window; ++x) {
    Rat y = n.V * q.f1.eval(x) / q.f2.eval(x);
    Rat drift = fast_y_drift(n, x, y);
    Rat scale(0);  // sum of absolute drift contributions
    for (const auto& r : n.reactions)
      if (r.tier == Tier::Fast)
        scale += abs(Rat(r.eta_y()) * r.kappa *
                     Rat(falling_factorial(Int(x), r.reactants[0])) *
                     ff_rat(y, r.reactants[1]));
    if (scale == 0) continue;
    if (abs(drift) * 20 > scale) {
      warnings.push_back("fast-tier Y-drift at y = V g(" + std::to_string(x) +
                         ") is not small; declared QSS map may be inconsistent");
      break;
    }
  }
  return warnings;
}

// --- Two-species SSA ---------------------------------------------------------

struct Trajectory2 {
  std::vector<double> times;
  std::vector<long> xs;
  std::vector<long> ys;
  Trajectory::Termination terminated_by = Trajectory::Termination::Horizon;
};

namespace detail {

inline double ff_double(long x, unsigned k) {
  double acc = 1;
  for (unsigned i = 0; i < k; ++i) acc *= static_cast<double>(x - static_cast<long>(i));
  return x >= static_cast<long>(k) ? acc : 0.0;
}

/// Core 2-species SSA loop; asserts the fast-tier X conservation per event.
template <class Visitor>
Trajectory::Termination ssa2_run(const TwoSpeciesNetwork& net, long x0, long y0,
                                 double t_end, rng::Stream& stream, long jump_cap,
                                 Visitor&& visit) {
  struct Rxn {
    double kappa;
    unsigned nx, ny;
    int ex, ey;
    bool fast;
  };
  std::vector<Rxn> rxns;
  rxns.reserve(net.reactions.size());
  for (const auto& r : net.reactions)
    rxns.push_back({to_double(r.kappa), r.reactants[0], r.reactants[1], r.eta_x(),
                    r.eta_y(), r.tier == Tier::Fast});
  long x = x0, y = y0;
  double t = 0;
  std::vector<double> props(rxns.size());
  for (long jumps = 0;; ++jumps) {
    double q = 0;
    for (std::size_t k = 0; k < rxns.size(); ++k) {
      props[k] = rxns[k].kappa * ff_double(x, rxns[k].nx) * ff_double(y, rxns[k].ny);
      q += props[k];
    }
    if (q <= 0) return Trajectory::Termination::Absorbed;
    if (jumps >= jump_cap) return Trajectory::Termination::JumpCap;
    t += stream.exponential(q);
    if (t >= t_end) return Trajectory::Termination::Horizon;
    double u = stream.uniform() * q;
    std::size_t k = 0;
    for (; k + 1 < rxns.size(); ++k) {
      if (u <= props[k]) break;
      u -= props[k];
    }
    if (rxns[k].fast && rxns[k].ex != 0)
      throw std::logic_error("fast reaction changed X (conservation violated)");
    x += rxns[k].ex;
    y += rxns[k].ey;
    visit(t, x, y);
  }
}

}  // namespace detail

/// Exact SSA on Z^2_{>=0} with mass-action rates scaled by (U, V) as
/// declared in the rate constants.
inline Trajectory2 simulate_full(const TwoSpeciesNetwork& n, long x0, long y0,
                                 double t_end, std::uint64_t seed,
                                 long jump_cap = 100'000'000) {
  validate_network(n);
  Trajectory2 traj;
  traj.times.push_back(0);
  traj.xs.push_back(x0);
  traj.ys.push_back(y0);
  rng::Stream stream(seed);
  traj.terminated_by = detail::ssa2_run(n, x0, y0, t_end, stream, jump_cap,
                                        [&](double t, long x, long y) {
                                          traj.times.push_back(t);
                                          traj.xs.push_back(x);
                                          traj.ys.push_back(y);
                                        });
  return traj;
}

/// Streaming ensemble over the full network, recording the X component at
/// the grid times. Deterministic reduction, as in run_ensemble.
inline EnsembleStats run_ensemble_full(const TwoSpeciesNetwork& net, long x0, long y0,
                                       std::vector<double> times, long n_traj,
                                       std::uint64_t seed, EnsembleOptions opts = {}) {
  validate_network(net);
  if (!std::is_sorted(times.begin(), times.end()) || times.empty())
    throw std::invalid_argument("need a sorted nonempty time grid");
  double t_end = times.back() + 1e-12;
  unsigned n_threads = opts.threads ? opts.threads
                                    : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, 64);

  struct Partial {
    std::vector<std::map<long, long>> counts;
    long capped = 0;
  };
  std::vector<Partial> partials(n_threads);
  for (auto& p : partials) p.counts.resize(times.size());

  auto worker = [&](unsigned tid) {
    Partial& p = partials[tid];
    for (long k = tid; k < n_traj; k += n_threads) {
      rng::Stream stream(rng::stream_seed(seed, static_cast<std::uint64_t>(k)));
      std::vector<long> at(times.size(), x0);
      std::size_t next = 0;
      long x_prev = x0;
      auto visit = [&](double tj, long xj, long) {
        while (next < times.size() && times[next] < tj) at[next++] = x_prev;
        x_prev = xj;
      };
      Trajectory::Termination term =
          detail::ssa2_run(net, x0, y0, t_end, stream, opts.jump_cap, visit);
      if (term == Trajectory::Termination::JumpCap) {
        ++p.capped;
        continue;
      }
      while (next < times.size()) at[next++] = x_prev;
      for (std::size_t i = 0; i < times.size(); ++i) ++p.counts[i][at[i]];
    }
  };
  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned tid = 0; tid < n_threads; ++tid) pool.emplace_back(worker, tid);
    for (auto& th : pool) th.join();
  }

  EnsembleStats stats;
  stats.times = times;
  stats.n_traj = n_traj;
  stats.seed = seed;
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::map<long, long> merged;
    long included = 0;
    for (const auto& p : partials)
      for (const auto& [x, c] : p.counts[i]) {
        merged[x] += c;
        included += c;
      }
    if (included == 0) throw std::domain_error("all runs excluded (jump_cap)");
    std::vector<double> mass(static_cast<std::size_t>(merged.rbegin()->first) + 1, 0.0);
    for (const auto& [x, c] : merged)
      mass[static_cast<std::size_t>(x)] =
          static_cast<double>(c) / static_cast<double>(included);
    stats.dists.emplace_back(std::move(mass));
    stats.mean.push_back(stats.dists.back().mean());
    stats.variance.push_back(stats.dists.back().variance());
  }
  for (const auto& p : partials) stats.jump_cap_terminated += p.capped;
  return stats;
}

/// Per time point, mean and variance of X in the full and the reduced
/// systems plus relative differences (relative to the larger magnitude,
/// floored to keep near-zero entries meaningful).
struct MomentComparison {
  std::vector<double> times;
  std::vector<double> full_mean, full_var;
  std::vector<double> reduced_mean, reduced_var;
  std::vector<double> rel_mean_diff, rel_var_diff;
  double max_rel_mean_diff = 0, max_rel_var_diff = 0;
};

inline MomentComparison compare_moments(const TwoSpeciesNetwork& net,
                                        const CtmcModel& reduced, long x0, long y0,
                                        const std::vector<double>& times, long n_traj,
                                        std::uint64_t seed, EnsembleOptions opts = {}) {
  EnsembleStats full = run_ensemble_full(net, x0, y0, times, n_traj, seed, opts);
  EnsembleStats red = run_ensemble(reduced, x0, times, n_traj,
                                   rng::mix64(seed ^ 0x5bd1e995u), opts);
  auto rel = [](double a, double b) {
    double scale = std::max({std::abs(a), std::abs(b), 0.02});
    return std::abs(a - b) / scale;
  };
  MomentComparison cmp;
  cmp.times = times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    cmp.full_mean.push_back(full.mean[i]);
    cmp.full_var.push_back(full.variance[i]);
    cmp.reduced_mean.push_back(red.mean[i]);
    cmp.reduced_var.push_back(red.variance[i]);
    cmp.rel_mean_diff.push_back(rel(full.mean[i], red.mean[i]));
    cmp.rel_var_diff.push_back(rel(full.variance[i], red.variance[i]));
    cmp.max_rel_mean_diff = std::max(cmp.max_rel_mean_diff, cmp.rel_mean_diff.back());
    cmp.max_rel_var_diff = std::max(cmp.max_rel_var_diff, cmp.rel_var_diff.back());
  }
  return cmp;
}

// --- The worked reduction example (fast/slow two-species system) -------------

/// Slow tier: 0 -> 2A (1), B+2A -> B+A (2/V), B+A -> B (6/V);
/// fast tier: 0 -> B (VU), B+2A -> 2A (U), B -> 0 (U).
/// QSS map g(x) = 1 / (x(x-1) + 1).
inline TwoSpeciesNetwork reduction_example_network(const Rat& U, const Rat& V) {
  TwoSpeciesNetwork n;
  n.U = U;
  n.V = V;
  n.reactions = {
      {{0, 0}, {2, 0}, Rat(1), Tier::Slow},
      {{2, 1}, {1, 1}, Rat(2) / V, Tier::Slow},
      {{1, 1}, {0, 1}, Rat(6) / V, Tier::Slow},
      {{0, 0}, {0, 1}, V * U, Tier::Fast},
      {{2, 1}, {2, 0}, U, Tier::Fast},
      {{0, 1}, {0, 0}, U, Tier::Fast},
  };
  validate_network(n);
  return n;
}

inline QssMap reduction_example_qss() {
  return QssMap(FallingPoly({Rat(1)}), FallingPoly({Rat(1), Rat(0), Rat(1)}));
}

// --- JSON network files -------------------------------------------------------
//
// {"scaling":{"U":"100","V":"1000"},
//  "qss":{"f1":["1"],"f2":["1","0","1"]},          (falling basis)
//  "reactions":[{"reactants":[0,0],"products":[2,0],"kappa":"1","tier":"slow"},...]}

inline nlohmann::json to_json(const TwoSpeciesNetwork& n, const QssMap* qss = nullptr) {
  nlohmann::json reactions = nlohmann::json::array();
  for (const auto& r : n.reactions)
    reactions.push_back({{"reactants", {r.reactants[0], r.reactants[1]}},
                         {"products", {r.products[0], r.products[1]}},
                         {"kappa", rat_str(r.kappa)},
                         {"tier", r.tier == Tier::Fast ? "fast" : "slow"}});
  nlohmann::json j = {{"species", {"X", "Y"}},
                      {"scaling", {{"U", rat_str(n.U)}, {"V", rat_str(n.V)}}},
                      {"reactions", reactions}};
  if (qss) {
    nlohmann::json f1 = nlohmann::json::array(), f2 = nlohmann::json::array();
    for (const auto& c : qss->f1.coeffs) f1.push_back(rat_str(c));
    for (const auto& c : qss->f2.coeffs) f2.push_back(rat_str(c));
    j["qss"] = {{"f1", f1}, {"f2", f2}};
  }
  return j;
}

struct NetworkFile {
  TwoSpeciesNetwork network;
  std::optional<QssMap> qss;
};

inline NetworkFile network_from_json(const nlohmann::json& j) {
  NetworkFile out;
  out.network.U = parse_rat(j.at("scaling").at("U").get<std::string>());
  out.network.V = parse_rat(j.at("scaling").at("V").get<std::string>());
  for (const auto& je : j.at("reactions")) {
    Reaction2 r;
    r.reactants = {je.at("reactants")[0].get<unsigned>(), je.at("reactants")[1].get<unsigned>()};
    r.products = {je.at("products")[0].get<unsigned>(), je.at("products")[1].get<unsigned>()};
    r.kappa = parse_rat(je.at("kappa").get<std::string>());
    std::string tier = je.at("tier").get<std::string>();
    if (tier != "fast" && tier != "slow")
      throw std::invalid_argument("reaction tier must be 'fast' or 'slow'");
    r.tier = tier == "fast" ? Tier::Fast : Tier::Slow;
    out.network.reactions.push_back(r);
  }
  validate_network(out.network);
  if (j.contains("qss"))
    out.qss.emplace(FallingPoly(parse_rat_array(j["qss"].at("f1"))),
                    FallingPoly(parse_rat_array(j["qss"].at("f2"))));
  return out;
}

inline NetworkFile load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file: " + path);
  nlohmann::json j;
  in >> j;
  return network_from_json(j);
}

}  // namespace ctmc1d
