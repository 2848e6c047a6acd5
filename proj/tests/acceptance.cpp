// Acceptance suite: runs every acceptance criterion end to end and prints one
// pass/fail line per criterion. Exit code is the number of failures.

#include <ctmc1d/experiments.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace ctmc1d;

namespace {

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::string&)> run;
};

bool check(bool cond, std::string& detail, const std::string& msg) {
  if (!cond) detail += (detail.empty() ? "" : "; ") + msg;
  return cond;
}

// 1. Michaelis-Menten classification table (four regimes, exact).
bool crit_mm_table(std::string& detail) {
  bool ok = true;
  auto rows = classification_table(false);
  ok &= check(rows.size() == 4, detail, "expected 4 regimes");
  for (const auto& r : rows)
    ok &= check(r.matches, detail, r.params + " -> got " + detail::verdict_word(r.verdict) +
                                       ", expected " + r.expected);
  ok &= check(rows[0].expected == "Exponential", detail, "row 1 regime");
  ok &= check(rows[2].expected == "NonExponential", detail, "row 3 regime");
  return ok;
}

// 2. Haldane classification table (three regimes, exact).
bool crit_haldane_table(std::string& detail) {
  bool ok = true;
  auto rows = classification_table(true);
  ok &= check(rows.size() == 3, detail, "expected 3 regimes");
  for (const auto& r : rows)
    ok &= check(r.matches, detail, r.params + " -> got " + detail::verdict_word(r.verdict) +
                                       ", expected " + r.expected);
  ok &= check(rows[2].expected == "NonExponential", detail, "row 3 regime");
  ok &= check(rows[1].expected == "NullRecurrent", detail, "row 2 regime");
  return ok;
}

// 3. Reduction pipeline: exact rates, exact indices, verdict.
bool crit_reduction(std::string& detail) {
  bool ok = true;
  TwoSpeciesNetwork net = reduction_example_network(Rat(100), Rat(1000));
  CtmcModel m = reduce(net, reduction_example_qss());
  RationalRate lambda1(FallingPoly({Rat(0), Rat(6), Rat(2)}),
                       FallingPoly({Rat(1), Rat(0), Rat(1)}));
  ok &= check(m.jumps().size() == 2, detail, "jump count");
  ok &= check(m.jumps()[0].eta == -1 && m.jumps()[0].rate == lambda1, detail,
              "lambda_1 not coefficient-exact");
  ok &= check(m.jumps()[1].eta == 2 && m.jumps()[1].rate == RationalRate::constant(Rat(1)),
              detail, "lambda_2 not the constant 1");
  LaurentIndices ix = indices(m);
  ok &= check(ix.R == 0 && ix.alpha == 0 && ix.gamma == -6, detail, "indices");
  ok &= check(ix.theta == 3, detail, "theta per the index formula");
  Verdict v = classify_model(m);
  ok &= check(v.ergodicity_speed == ErgodicitySpeed::NonExponential, detail, "verdict");
  return ok;
}

// 4. Theorem 5.1 partition property over 10^4 random index tuples.
bool crit_partition(std::string& detail) {
  std::mt19937_64 eng(20240601);
  std::uniform_int_distribution<long> num(-12, 12), den(1, 6), Rd(-3, 0);
  std::uniform_int_distribution<int> special(0, 5);
  for (int trial = 0; trial < 10'000; ++trial) {
    long R = Rd(eng);
    Rat theta = rat_of(1 + std::abs(num(eng)), den(eng));
    Rat alpha = rat_of(num(eng), den(eng));
    Rat gamma = rat_of(num(eng), den(eng));
    switch (special(eng)) {
      case 0: alpha = 0; break;
      case 1: alpha = 0; gamma = theta; break;
      case 2: alpha = 0; gamma = Rat(R - 1) * theta; break;
      default: break;
    }
    LaurentIndices ix;
    ix.alpha = alpha;
    ix.gamma = gamma;
    ix.theta = theta;
    ix.R = R;
    Verdict v = classify_laurent(ix);
    int fired = 0;
    for (const char* id : {"Thm5.1-i", "Thm5.1-ii", "Thm5.1-iii", "Thm5.1-iv"})
      if (v.fired(id)) ++fired;
    if (!check(fired == 1, detail, "tuple fired " + std::to_string(fired) + " cases"))
      return false;
    if (!check(!v.unresolved(), detail, "unresolved tuple")) return false;
  }
  return true;
}

// 5. Oracle agreement on 50 random unit birth-death models.
bool crit_oracle_agreement(std::string& detail) {
  std::mt19937_64 eng(424243);
  std::uniform_int_distribution<int> degd(0, 3), dend(0, 1);
  std::uniform_int_distribution<long> cd(0, 5);
  auto rand_rate = [&] {
    std::vector<Rat> nm(degd(eng) + 1, Rat(0));
    for (auto& c : nm) c = rat_of(cd(eng), 1 + cd(eng));
    nm.back() += 1;
    nm.front() += 1;
    std::vector<Rat> dn(dend(eng) + 1, Rat(0));
    for (auto& c : dn) c = rat_of(cd(eng), 3);
    dn.back() += 1;
    dn.front() += 1;
    return RationalRate(FallingPoly(nm), FallingPoly(dn));
  };
  int kept = 0, agreed = 0;
  while (kept < 50) {
    BirthDeathModel bd(rand_rate(), rand_rate());
    CtmcModel m;
    m.add_jump(1, bd.b);
    m.add_jump(-1, bd.d);
    LaurentIndices ix = indices(m);
    if (ix.alpha == 0 && (ix.gamma == ix.theta || ix.gamma == Rat(ix.R - 1) * ix.theta))
      continue;  // boundary expansion
    ++kept;
    Verdict v = classify_model(m);
    BdRecurrence rec = karlin_recurrence(bd);
    bool match = false;
    if (v.recurrence == Recurrence::Transient) {
      match = rec == BdRecurrence::Transient;
    } else if (v.recurrence == Recurrence::NullRecurrent) {
      match = rec == BdRecurrence::Recurrent &&
              bd_positive_recurrence(bd) == BdPositivity::Null;
    } else if (v.recurrence == Recurrence::PositiveRecurrent) {
      match = rec == BdRecurrence::Recurrent &&
              bd_positive_recurrence(bd) == BdPositivity::Positive;
    }
    if (match) ++agreed;
  }
  return check(agreed == 50, detail,
               "agreement " + std::to_string(agreed) + "/50 (50/50 required)");
}

// 6. Generator-expansion residual ratios in [0.95, 1.05] at x = 10^4.
bool crit_generator_residuals(std::string& detail) {
  std::mt19937_64 eng(777001);
  std::uniform_int_distribution<int> etad(1, 3), degd(0, 4), njd(1, 4);
  std::uniform_int_distribution<long> cd(0, 6);
  const long x = 10'000;
  int models = 0, checked = 0;
  bool ok = true;
  while (models < 20) {
    CtmcModel m;
    int njumps = njd(eng);
    for (int k = 0; k < njumps; ++k) {
      int eta = etad(eng) * (eng() % 2 ? 1 : -1);
      std::vector<Rat> nm(degd(eng) + 1, Rat(0));
      for (auto& c : nm) c = rat_of(cd(eng), 1 + cd(eng));
      nm.back() += 1;
      std::vector<Rat> dn(degd(eng) % 2 + 1, Rat(0));
      for (auto& c : dn) c = rat_of(cd(eng), 2);
      dn.back() += 1;
      dn.front() += 1;
      m.add_jump(eta, RationalRate(FallingPoly(nm), FallingPoly(dn)));
    }
    ++models;
    LaurentIndices ix = indices(m);
    MomentFns fns = moments(m);
    struct Probe {
      GeneratorProbe probe;
      double p;
      bool exponential;
    };
    std::vector<Probe> probes = {{GeneratorProbe::power_log(0, 1), 0.0, false},
                                 {GeneratorProbe::power_log(1, 0), 1.0, false},
                                 {GeneratorProbe::power_log(0.5, 0.5), 0.5, false},
                                 {GeneratorProbe::exponential(1e-3), 1e-3, true}};
    for (const auto& pr : probes) {
      // guard: the two-term prediction's leading bracket must be away from 0
      bool leading_nonzero;
      if (pr.exponential) {
        double mx = to_double(fns.eval_m(x)), vx = to_double(fns.eval_v(x));
        leading_nonzero = std::abs(mx + pr.p * vx) >= 1e-3 * vx;
      } else if (ix.alpha != 0) {
        leading_nonzero = true;  // alpha x^{R+1} dominates the bracket
      } else {
        // alpha = 0: the bracket tends to gamma + (p-1) theta on the
        // p-branch, gamma - theta on the q-branch at p = 0
        double g = to_double(ix.gamma), th = to_double(ix.theta);
        double lim = pr.probe.p != 0 ? g + (pr.probe.p - 1.0) * th : g - th;
        leading_nonzero = std::abs(lim) >= 0.01 * th;
      }
      if (!leading_nonzero) continue;
      auto rows = expansion_residual(m, pr.probe, {x});
      ++checked;
      ok &= check(rows[0].ratio >= 0.95 && rows[0].ratio <= 1.05, detail,
                  "ratio " + std::to_string(rows[0].ratio) + " outside [0.95,1.05]");
    }
  }
  ok &= check(checked >= 30, detail, "too few qualifying (model, probe) pairs");
  return ok;
}

// 7. Stationary solver: M/M/1 closed form and product-form equality.
bool crit_stationary(std::string& detail) {
  bool ok = true;
  CtmcModel mm1;
  mm1.add_jump(1, RationalRate::constant(Rat(1)));
  mm1.add_jump(-1, RationalRate::constant(Rat(2)));
  StationaryResult res = stationary_truncated(mm1, 200);
  double sup = 0;
  for (long s = 0; s <= 200; ++s)
    sup = std::max(sup, std::abs(res.dist(s) - std::pow(0.5, static_cast<double>(s + 1))));
  ok &= check(sup <= 1e-10, detail, "M/M/1 sup-norm " + std::to_string(sup));

  std::mt19937_64 eng(909090);
  std::uniform_int_distribution<long> cd(0, 4);
  std::uniform_int_distribution<int> degd(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    auto rand_rate = [&] {
      std::vector<Rat> nm(degd(eng) + 1, Rat(0));
      for (auto& c : nm) c = rat_of(cd(eng), 1 + cd(eng));
      nm.back() += 1;
      nm.front() += 1;
      return RationalRate(FallingPoly(nm), FallingPoly::constant(Rat(1)));
    };
    BirthDeathModel bd(rand_rate(), rand_rate());
    CtmcModel m;
    m.add_jump(1, bd.b);
    m.add_jump(-1, bd.d);
    double tv = tv_distance(stationary_truncated(m, 200).dist, bd_stationary(bd, 200));
    ok &= check(tv <= 1e-10, detail, "product-form TV " + std::to_string(tv));
  }
  return ok;
}

// 8. Figure-1-style slope experiment: tight spread for the exponential
//    model, strictly larger spread for the non-exponential one.
bool crit_figure1(std::string& detail) {
  SlopeExperimentConfig cfg;
  SlopeExperimentResult res = figure1_experiment(cfg);
  bool ok = true;
  ok &= check(!std::isnan(res.exp_spread) && !std::isnan(res.nonexp_spread), detail,
              "slope fit failed (too few points in a window)");
  ok &= check(res.exp_spread <= 0.25, detail,
              "exponential-model slope spread " + std::to_string(res.exp_spread));
  ok &= check(res.nonexp_spread > res.exp_spread, detail,
              "spread ordering violated: " + std::to_string(res.nonexp_spread) +
                  " <= " + std::to_string(res.exp_spread));
  return ok;
}

// 9. Figure-2-style reduction comparison at U=100, V=1000, 10^4 paths.
bool crit_figure2(std::string& detail) {
  ReductionExperimentConfig cfg;
  ReductionExperimentResult res = figure2_experiment(cfg);
  bool ok = true;
  ok &= check(res.comparison.max_rel_mean_diff <= 0.10, detail,
              "mean rel diff " + std::to_string(res.comparison.max_rel_mean_diff));
  ok &= check(res.comparison.max_rel_var_diff <= 0.10, detail,
              "variance rel diff " + std::to_string(res.comparison.max_rel_var_diff));
  return ok;
}

// 10. Explosivity: classification and jump-cap flagging.
bool crit_explosivity(std::string& detail) {
  bool ok = true;
  CtmcModel m;
  m.add_jump(1, RationalRate::from_monomial(MonomialPoly({Rat(0), Rat(0), Rat(0), Rat(1)}),
                                            MonomialPoly({Rat(1)})));
  Verdict v = classify_model(m);
  ok &= check(v.explosivity == Explosivity::Explosive, detail, "not classified explosive");
  ok &= check(v.fired("Thm4.1-1"), detail, "item 1 did not fire");

  const long runs = 200;
  TerminationCounts counts = count_terminations(m, 10, 1.0, runs, 4242, 1'000'000);
  double frac = static_cast<double>(counts.jump_cap) / static_cast<double>(runs);
  ok &= check(frac >= 0.99, detail, "jump_cap fraction " + std::to_string(frac));
  return ok;
}

// 11. Single-species mass-action corollary: positive recurrent implies
//     exponentially ergodic.
bool crit_mass_action_corollary(std::string& detail) {
  std::mt19937_64 eng(161803);
  std::uniform_int_distribution<unsigned> nud(0, 4), nupd(0, 4);
  std::uniform_int_distribution<long> kd(1, 9);
  std::uniform_int_distribution<int> nreact(1, 4);
  int found = 0;
  bool ok = true;
  while (found < 20) {
    CtmcModel m;
    int nr = nreact(eng);
    for (int k = 0; k < nr; ++k) {
      unsigned nu = nud(eng), nup = nupd(eng);
      if (nu == nup) nup = nu + 1;
      m.add_jump(static_cast<int>(nup) - static_cast<int>(nu),
                 RationalRate::falling_monomial(rat_of(kd(eng), kd(eng)), nu));
    }
    if (!is_mass_action(m)) continue;  // merged jumps can break the form
    Verdict v = classify_model(m);
    if (v.recurrence != Recurrence::PositiveRecurrent) continue;
    ++found;
    ok &= check(v.ergodicity_speed == ErgodicitySpeed::Exponential, detail,
                "positive-recurrent mass-action model not exponential");
  }
  return ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "Michaelis-Menten classification table (exact)", crit_mm_table},
      {2, "Haldane classification table (exact)", crit_haldane_table},
      {3, "reduction pipeline rates/indices/verdict (exact)", crit_reduction},
      {4, "R<=0 partition property on 10^4 random tuples", crit_partition},
      {5, "classifier vs birth-death oracle on 50 random models", crit_oracle_agreement},
      {6, "generator-expansion residual ratios at x=10^4", crit_generator_residuals},
      {7, "stationary solver closed forms and product-form equality", crit_stationary},
      {8, "TV-decay slope spread ordering (50k trajectories)", crit_figure1},
      {9, "full vs reduced moments within 10% (U=100, V=1000)", crit_figure2},
      {10, "explosive model flagged and >=99% jump-cap runs", crit_explosivity},
      {11, "mass-action positive recurrence implies exponential", crit_mass_action_corollary},
  };

  int failures = 0;
  for (auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", c.id,
                c.name.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
