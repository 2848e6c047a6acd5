#pragma once

/**
 * @file ssa.hpp
 * @brief Exact Gillespie simulation of 1-D models, ensemble statistics, and
 *        total-variation decay experiments.
 *
 * Determinism contract: per-trajectory RNG streams are derived from the
 * master seed and the trajectory index, the uniform-to-double mapping is
 * hand-rolled on top of std::mt19937_64 (whose output is pinned by the
 * standard), and ensemble aggregation is a sum of integer histograms, so
 * results are independent of thread count and completion order.
 */

#include "distribution.hpp"
#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace ctmc1d {

namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream seed for trajectory k under a master seed.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t k) {
  return mix64(master + 0x9E3779B97F4A7C15ULL * (k + 1));
}

struct Stream {
  std::mt19937_64 eng;
  explicit Stream(std::uint64_t seed) : eng(seed) {}
  /// Uniform strictly inside (0, 1), so -log is finite and waiting times
  /// are strictly positive.
  double uniform() {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
  }
  double exponential(double rate) { return -std::log(uniform()) / rate; }
};

}  // namespace rng

/// Per-state rate cache. Values are derived from exact rational evaluation
/// and carry only the double-conversion rounding (< 1e-15 relative).
class CachedRates {
 public:
  explicit CachedRates(const CtmcModel& m) : model_(&m) {
    for (const auto& j : m.jumps()) etas_.push_back(j.eta);
  }

  std::size_t jump_count() const { return etas_.size(); }
  int eta(std::size_t k) const { return etas_[k]; }

  void ensure(long x) {
    while (static_cast<long>(total_.size()) <= x) {
      long s = static_cast<long>(total_.size());
      double tot = 0;
      for (const auto& j : model_->jumps()) {
        double r = to_double(model_->effective_rate(s, j));
        flat_.push_back(r);
        tot += r;
      }
      total_.push_back(tot);
    }
  }
  double total(long x) { ensure(x); return total_[static_cast<std::size_t>(x)]; }
  double rate(long x, std::size_t k) const {
    return flat_[static_cast<std::size_t>(x) * etas_.size() + k];
  }

 private:
  const CtmcModel* model_;
  std::vector<int> etas_;
  std::vector<double> flat_;   // state-major, one entry per jump
  std::vector<double> total_;
};

struct Trajectory {
  enum class Termination { Horizon, Absorbed, JumpCap };
  std::vector<double> times;  // strictly increasing, starts at 0
  std::vector<long> states;   // states[k] holds from times[k] to times[k+1]
  Termination terminated_by = Termination::Horizon;

  /// State at time t (last state carried forward after absorption).
  long state_at(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times.begin());
    return states[k > 0 ? k - 1 : 0];
  }
};

inline const char* to_string(Trajectory::Termination t) {
  switch (t) {
    case Trajectory::Termination::Horizon: return "horizon";
    case Trajectory::Termination::Absorbed: return "absorbed";
    default: return "jump_cap";
  }
}

namespace detail {

/// Core SSA loop, generic over the rate provider (anything exposing
/// jump_count/eta/rate/total). Visitor is called as visitor(t_jump,
/// new_state) after each jump; trajectory recording and the streaming
/// ensemble both use it.
template <class Rates, class Visitor>
Trajectory::Termination ssa_run(Rates& rates, long x0, double t_end,
                                rng::Stream& stream, long jump_cap, long& x_out,
                                double& t_out, Visitor&& visitor) {
  long x = x0;
  double t = 0;
  for (long jumps = 0;; ++jumps) {
    double q = rates.total(x);
    if (q <= 0) {
      x_out = x;
      t_out = t;
      return Trajectory::Termination::Absorbed;
    }
    if (jumps >= jump_cap) {
      x_out = x;
      t_out = t;
      return Trajectory::Termination::JumpCap;
    }
    t += stream.exponential(q);
    if (t >= t_end) {
      x_out = x;
      t_out = t_end;
      return Trajectory::Termination::Horizon;
    }
    double u = stream.uniform() * q;
    std::size_t k = 0;
    for (; k + 1 < rates.jump_count(); ++k) {
      double r = rates.rate(x, k);
      if (u <= r) break;
      u -= r;
    }
    x += rates.eta(k);
    visitor(t, x);
  }
}

}  // namespace detail

/// Exact SSA: exponential holding times at the total rate, jumps chosen
/// proportionally to the individual rates. Runs exceeding jump_cap before
/// t_end are flagged as explosion suspects.
inline Trajectory simulate(const CtmcModel& m, long x0, double t_end,
                           std::uint64_t seed, long jump_cap = 1'000'000) {
  if (x0 < 0) throw std::invalid_argument("x0 must be non-negative");
  if (t_end <= 0) throw std::invalid_argument("t_end must be positive");
  CachedRates rates(m);
  rng::Stream stream(seed);
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  long x = 0;
  double t = 0;
  traj.terminated_by = detail::ssa_run(rates, x0, t_end, stream, jump_cap, x, t,
                                       [&](double tj, long xj) {
                                         traj.times.push_back(tj);
                                         traj.states.push_back(xj);
                                       });
  return traj;
}

/// Histogram of states at time t over included runs; absorbed runs carry
/// their last state forward, jump_cap runs are excluded and counted.
inline Distribution empirical_dist(const std::vector<Trajectory>& runs, double t,
                                   long* excluded = nullptr) {
  std::map<long, long> counts;
  long included = 0, capped = 0;
  for (const auto& r : runs) {
    if (r.terminated_by == Trajectory::Termination::JumpCap) {
      ++capped;
      continue;
    }
    ++counts[r.state_at(t)];
    ++included;
  }
  if (excluded) *excluded = capped;
  if (included == 0) throw std::domain_error("all runs excluded (jump_cap)");
  std::vector<double> mass(static_cast<std::size_t>(counts.rbegin()->first) + 1, 0.0);
  for (const auto& [x, c] : counts)
    mass[static_cast<std::size_t>(x)] = static_cast<double>(c) / static_cast<double>(included);
  return Distribution(std::move(mass));
}

/// Total variation distance (supports unioned; missing mass is zero).
inline double tv_distance(const Distribution& p, const Distribution& q) {
  std::size_t n = std::max(p.mass.size(), q.mass.size());
  double acc = 0;
  for (std::size_t x = 0; x < n; ++x) acc += std::abs(p(x) - q(x));
  return acc / 2;
}

/// Per-time empirical distributions, means and variances of an ensemble.
struct EnsembleStats {
  std::vector<double> times;
  std::vector<Distribution> dists;   // over included runs
  std::vector<double> mean;
  std::vector<double> variance;
  long n_traj = 0;
  long jump_cap_terminated = 0;
  std::uint64_t seed = 0;
};

struct EnsembleOptions {
  long jump_cap = 1'000'000;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Streams n_traj trajectories, recording state histograms at the given
/// times. Aggregation is a deterministic reduction (integer histogram sums).
inline EnsembleStats run_ensemble(const CtmcModel& m, long x0,
                                  std::vector<double> times, long n_traj,
                                  std::uint64_t seed, EnsembleOptions opts = {}) {
  if (!std::is_sorted(times.begin(), times.end()))
    throw std::invalid_argument("time grid must be sorted");
  if (times.empty() || n_traj <= 0)
    throw std::invalid_argument("need a nonempty grid and n_traj > 0");
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
    CachedRates rates(m);
    Partial& p = partials[tid];
    for (long k = tid; k < n_traj; k += n_threads) {
      rng::Stream stream(rng::stream_seed(seed, static_cast<std::uint64_t>(k)));
      std::vector<long> at(times.size(), x0);
      std::size_t next = 0;
      long x_prev = x0;
      long x_fin = 0;
      double t_fin = 0;
      auto visit = [&](double tj, long xj) {
        while (next < times.size() && times[next] < tj) at[next++] = x_prev;
        x_prev = xj;
      };
      Trajectory::Termination term =
          detail::ssa_run(rates, x0, t_end, stream, opts.jump_cap, x_fin, t_fin, visit);
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

/// Termination tally over an ensemble (no histograms; usable when every run
/// is expected to hit the jump cap, e.g. explosivity flagging).
struct TerminationCounts {
  long horizon = 0;
  long absorbed = 0;
  long jump_cap = 0;
};

inline TerminationCounts count_terminations(const CtmcModel& m, long x0, double t_end,
                                            long n_traj, std::uint64_t seed,
                                            long jump_cap) {
  TerminationCounts counts;
  CachedRates rates(m);
  for (long k = 0; k < n_traj; ++k) {
    rng::Stream stream(rng::stream_seed(seed, static_cast<std::uint64_t>(k)));
    long x = 0;
    double t = 0;
    switch (detail::ssa_run(rates, x0, t_end, stream, jump_cap, x, t,
                            [](double, long) {})) {
      case Trajectory::Termination::Horizon: ++counts.horizon; break;
      case Trajectory::Termination::Absorbed: ++counts.absorbed; break;
      case Trajectory::Termination::JumpCap: ++counts.jump_cap; break;
    }
  }
  return counts;
}

// --- TV decay experiment ----------------------------------------------------

struct TvDecayOptions {
  double noise_floor_factor = 2.0;  // plateau cutoff multiplier
  double fit_start_tv = 0.05;       // fit deep in the tail, past the pre-mixing transient
  long fallback_fit_points = 12;    // deepest segment when TV never dips below the start
  long jump_cap = 1'000'000;
  unsigned threads = 0;
};

struct TvDecayRow {
  long x0 = 0;
  double t = 0;
  double tv = 0;
  double log_tv = 0;
};

struct TvSlope {
  long x0 = 0;
  double slope = 0;
  long points = 0;
  double window_start = 0;
  double window_end = 0;
};

struct MomentRow {
  long x0 = 0;
  double t = 0;
  double mean = 0;
  double variance = 0;
};

struct TvDecayResult {
  std::vector<TvDecayRow> rows;
  std::vector<MomentRow> moments;  // ensemble mean/variance per (x0, t)
  std::vector<TvSlope> slopes;
  double noise_floor = 0;
};

/// Per initial state and time, the TV distance of the empirical law to the
/// reference and its log; plus a fitted slope of log TV over the pre-plateau
/// window (the plateau sets in when TV drops below noise_floor_factor times
/// the Monte-Carlo noise floor sqrt(N_support / (2 n_traj))).
inline TvDecayResult tv_decay(const CtmcModel& m, const std::vector<long>& x0s,
                              const std::vector<double>& times, long n_traj,
                              const Distribution& reference, std::uint64_t seed,
                              TvDecayOptions opts = {}) {
  long support = 0;
  for (double v : reference.mass)
    if (v > 1e-12) ++support;
  TvDecayResult res;
  res.noise_floor =
      std::sqrt(static_cast<double>(std::max(support, 1L)) / (2.0 * static_cast<double>(n_traj)));
  double cutoff = opts.noise_floor_factor * res.noise_floor;

  for (std::size_t i = 0; i < x0s.size(); ++i) {
    EnsembleOptions eopts;
    eopts.jump_cap = opts.jump_cap;
    eopts.threads = opts.threads;
    EnsembleStats stats = run_ensemble(m, x0s[i], times, n_traj,
                                       rng::stream_seed(seed, 1'000'003 * i), eopts);
    std::vector<double> fit_t, fit_y, all_t, all_y;
    bool plateau = false;
    for (std::size_t k = 0; k < times.size(); ++k) {
      res.moments.push_back({x0s[i], times[k], stats.mean[k], stats.variance[k]});
      double tv = tv_distance(stats.dists[k], reference);
      res.rows.push_back({x0s[i], times[k], tv,
                          std::log(std::max(tv, 1e-300))});
      if (tv < cutoff) plateau = true;
      if (plateau) continue;
      all_t.push_back(times[k]);
      all_y.push_back(std::log(tv));
      if (tv <= opts.fit_start_tv) {
        fit_t.push_back(times[k]);
        fit_y.push_back(std::log(tv));
      }
    }
    if (fit_t.size() < 3 && all_t.size() >= 3) {
      // the curve never dipped below the start threshold: fit the deepest
      // available pre-plateau segment instead
      std::size_t keep = std::min<std::size_t>(all_t.size(),
                                               static_cast<std::size_t>(opts.fallback_fit_points));
      fit_t.assign(all_t.end() - static_cast<long>(keep), all_t.end());
      fit_y.assign(all_y.end() - static_cast<long>(keep), all_y.end());
    }
    TvSlope s;
    s.x0 = x0s[i];
    s.points = static_cast<long>(fit_t.size());
    if (fit_t.size() >= 3) {
      double n = static_cast<double>(fit_t.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t k = 0; k < fit_t.size(); ++k) {
        sx += fit_t[k];
        sy += fit_y[k];
        sxx += fit_t[k] * fit_t[k];
        sxy += fit_t[k] * fit_y[k];
      }
      s.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      s.window_start = fit_t.front();
      s.window_end = fit_t.back();
    } else {
      s.slope = std::nan("");
    }
    res.slopes.push_back(s);
  }
  return res;
}

}  // namespace ctmc1d
