#pragma once

/**
 * @file experiments.hpp
 * @brief The worked examples and reproducible experiments: the
 *        Michaelis-Menten and Haldane classification tables, the TV-decay
 *        slope experiment, and the full-vs-reduced moment comparison.
 */

#include "bd_oracle.hpp"
#include "classifier.hpp"
#include "master_eq.hpp"
#include "reduction.hpp"
#include "ssa.hpp"

#include <string>
#include <vector>

namespace ctmc1d {

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

// --- Named example models -----------------------------------------------------

/// Michaelis-Menten birth-death network with consumption (n1, V1, K1, jump
/// -c1) and production (n2, V2, K2, jump +c2).
inline CtmcModel mm_network(unsigned n1, const Rat& V1, const Rat& K1, int c1,
                            unsigned n2, const Rat& V2, const Rat& K2, int c2) {
  return bd_network(mm_rate(n1, V1, K1, -c1), mm_rate(n2, V2, K2, c2));
}

inline CtmcModel haldane_network(unsigned n1, const Rat& V1, const Rat& K1, int c1,
                                 unsigned n2, const Rat& V2, const Rat& K2, int c2) {
  return bd_network(haldane_rate(n1, V1, K1, -c1), haldane_rate(n2, V2, K2, c2));
}

/// The exponentially ergodic example: (V,K) = (1,1,1,1), (n,c) = (3,2,2,1).
inline CtmcModel mm_exponential_example() {
  return mm_network(3, Rat(1), Rat(1), 2, 2, Rat(1), Rat(1), 1);
}

/// The non-exponentially ergodic example: (V,K) = (3,1,2,3), (n,c) = (4,2,1,1).
inline CtmcModel mm_nonexponential_example() {
  return mm_network(4, Rat(3), Rat(1), 2, 1, Rat(2), Rat(3), 1);
}

inline CtmcModel haldane_nonexponential_example() {
  return haldane_network(1, Rat(16), Rat(1), 1, 1, Rat(1), Rat(4), 1);
}

inline CtmcModel haldane_null_example() {
  return haldane_network(1, Rat(1), Rat(2), 1, 1, Rat(4), Rat(1), 1);
}

// --- Classification tables ----------------------------------------------------

struct TableRow {
  std::string label;
  std::string params;
  Verdict verdict;
  std::string expected;  // closed-form regime prediction
  bool matches = false;
};

namespace detail {

inline std::string verdict_word(const Verdict& v) {
  if (v.recurrence == Recurrence::Transient) return "Transient";
  if (v.recurrence == Recurrence::NullRecurrent) return "NullRecurrent";
  if (v.recurrence == Recurrence::PositiveRecurrent) {
    if (v.ergodicity_speed == ErgodicitySpeed::Exponential) return "Exponential";
    if (v.ergodicity_speed == ErgodicitySpeed::NonExponential) return "NonExponential";
    return "PositiveRecurrent";
  }
  return "Unresolved";
}

}  // namespace detail

/// Closed-form regime predicate for the MM birth-death network.
inline std::string mm_expected_verdict(unsigned n1, const Rat& V1, const Rat& K1, int c1,
                                       unsigned n2, const Rat& V2, const Rat& K2, int c2) {
  Rat w1 = Rat(c1) * V1, w2 = Rat(c2) * V2;
  for (unsigned i = 0; i < n1; ++i) w1 *= K1;
  for (unsigned i = 0; i < n2; ++i) w2 *= K2;
  Rat half = Rat(c1 + c2) / 2;
  if (w1 > w2) return "Exponential";
  if (w1 < w2 || K1 - K2 > half) return "Transient";
  if (K1 - K2 < -half) return "NonExponential";
  return "NullRecurrent";
}

/// Closed-form regime predicate for the Haldane birth-death network.
inline std::string haldane_expected_verdict(unsigned n1, const Rat& V1, const Rat& K1,
                                            int c1, unsigned n2, const Rat& V2,
                                            const Rat& K2, int c2) {
  Rat w1 = Rat(c1) * V1, w2 = Rat(c2) * V2;
  for (unsigned i = 0; i <= n1; ++i) w1 *= K1;
  for (unsigned i = 0; i <= n2; ++i) w2 *= K2;
  Rat half = Rat(c1 + c2) / 2;
  if (w1 < w2 || (w1 == w2 && K1 - K2 > half)) return "Transient";
  if (w1 == w2 && -Rat(c1 + c2) <= K1 - K2 && K1 - K2 <= half) return "NullRecurrent";
  return "NonExponential";
}

struct MmParams {
  unsigned n1;
  long V1, K1;
  int c1;
  unsigned n2;
  long V2, K2;
  int c2;
  std::string params_str() const {
    return "(V,K)=(" + std::to_string(V1) + "," + std::to_string(K1) + "," +
           std::to_string(V2) + "," + std::to_string(K2) + "),(n,c)=(" +
           std::to_string(n1) + "," + std::to_string(c1) + "," + std::to_string(n2) +
           "," + std::to_string(c2) + ")";
  }
};

/// One parameter set per regime (a)-(d); the first and third rows are the
/// worked examples.
inline std::vector<MmParams> mm_table_params() {
  return {
      {3, 1, 1, 2, 2, 1, 1, 1},  // (a) exponential
      {1, 1, 1, 1, 1, 2, 1, 1},  // (b) transient
      {4, 3, 1, 2, 1, 2, 3, 1},  // (c) non-exponential
      {1, 1, 1, 1, 1, 1, 1, 1},  // (d) null recurrent
  };
}

inline std::vector<MmParams> haldane_table_params() {
  return {
      {1, 1, 1, 1, 1, 1, 2, 1},   // (a) transient
      {1, 1, 2, 1, 1, 4, 1, 1},   // (b) null recurrent
      {1, 16, 1, 1, 1, 1, 4, 1},  // (c) non-exponential
  };
}

inline std::vector<TableRow> classification_table(bool haldane) {
  std::vector<TableRow> rows;
  for (const auto& p : haldane ? haldane_table_params() : mm_table_params()) {
    CtmcModel m = haldane ? haldane_network(p.n1, Rat(p.V1), Rat(p.K1), p.c1, p.n2,
                                            Rat(p.V2), Rat(p.K2), p.c2)
                          : mm_network(p.n1, Rat(p.V1), Rat(p.K1), p.c1, p.n2,
                                       Rat(p.V2), Rat(p.K2), p.c2);
    TableRow row;
    row.label = haldane ? "haldane" : "michaelis-menten";
    row.params = p.params_str();
    row.verdict = classify_model(m);
    row.expected = haldane
                       ? haldane_expected_verdict(p.n1, Rat(p.V1), Rat(p.K1), p.c1,
                                                  p.n2, Rat(p.V2), Rat(p.K2), p.c2)
                       : mm_expected_verdict(p.n1, Rat(p.V1), Rat(p.K1), p.c1, p.n2,
                                             Rat(p.V2), Rat(p.K2), p.c2);
    row.matches = detail::verdict_word(row.verdict) == row.expected;
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- TV-decay slope experiment (Figure 1 style) --------------------------------

struct SlopeExperimentConfig {
  std::vector<long> x0s{10, 30, 60};
  long n_traj = 50'000;
  std::uint64_t seed = 42;
  double t_end_exponential = 220.0;
  double t_end_nonexponential = 600.0;
  std::size_t grid_points = 89;
  long truncation = 400;
  unsigned threads = 0;
};

struct SlopeExperimentResult {
  TvDecayResult exponential;
  TvDecayResult nonexponential;
  double exp_spread = 0;     // (max-min)/|mean| of fitted slopes
  double nonexp_spread = 0;
};

inline double slope_spread(const std::vector<TvSlope>& slopes) {
  double lo = 0, hi = 0, sum = 0;
  bool first = true;
  for (const auto& s : slopes) {
    if (std::isnan(s.slope)) return std::nan("");
    lo = first ? s.slope : std::min(lo, s.slope);
    hi = first ? s.slope : std::max(hi, s.slope);
    sum += s.slope;
    first = false;
  }
  double mean = sum / static_cast<double>(slopes.size());
  return (hi - lo) / std::abs(mean);
}

inline SlopeExperimentResult figure1_experiment(const SlopeExperimentConfig& cfg = {}) {
  SlopeExperimentResult out;
  TvDecayOptions topts;
  topts.threads = cfg.threads;

  CtmcModel expm = mm_exponential_example();
  Distribution ref_exp = stationary_truncated(expm, cfg.truncation).dist;
  out.exponential =
      tv_decay(expm, cfg.x0s, linspace(0, cfg.t_end_exponential, cfg.grid_points),
               cfg.n_traj, ref_exp, cfg.seed, topts);

  CtmcModel nonm = mm_nonexponential_example();
  Distribution ref_non = stationary_truncated(nonm, cfg.truncation).dist;
  out.nonexponential =
      tv_decay(nonm, cfg.x0s, linspace(0, cfg.t_end_nonexponential, cfg.grid_points),
               cfg.n_traj, ref_non, rng::mix64(cfg.seed ^ 0xf1u), topts);

  out.exp_spread = slope_spread(out.exponential.slopes);
  out.nonexp_spread = slope_spread(out.nonexponential.slopes);
  return out;
}

// --- Full vs reduced moment comparison (Figure 2 style) ------------------------

struct ReductionExperimentConfig {
  long U = 100;
  long V = 1000;
  long n_traj = 10'000;
  std::uint64_t seed = 42;
  double t_end = 3.0;
  std::size_t grid_points = 13;
  unsigned threads = 0;
};

struct ReductionExperimentResult {
  MomentComparison comparison;
  CtmcModel reduced;
  Verdict verdict;
};

inline ReductionExperimentResult figure2_experiment(const ReductionExperimentConfig& cfg = {}) {
  TwoSpeciesNetwork net = reduction_example_network(Rat(cfg.U), Rat(cfg.V));
  QssMap qss = reduction_example_qss();
  ReductionExperimentResult out;
  out.reduced = reduce(net, qss);
  out.verdict = classify_model(out.reduced);
  EnsembleOptions opts;
  opts.threads = cfg.threads;
  out.comparison =
      compare_moments(net, out.reduced, 1, cfg.V, linspace(0, cfg.t_end, cfg.grid_points),
                      cfg.n_traj, cfg.seed, opts);
  return out;
}

}  // namespace ctmc1d
