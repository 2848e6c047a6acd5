#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ctmc1d/bd_oracle.hpp>
#include <ctmc1d/master_eq.hpp>
#include <ctmc1d/ssa.hpp>

#include <cmath>

using namespace ctmc1d;

namespace {

CtmcModel mm1_model() {  // b = 1, d = 2
  CtmcModel m;
  m.add_jump(1, RationalRate::constant(Rat(1)));
  m.add_jump(-1, RationalRate::constant(Rat(2)));
  return m;
}

std::vector<double> coarse_times() {
  std::vector<double> t;
  for (int i = 0; i <= 10; ++i) t.push_back(2.0 * i);
  return t;
}

}  // namespace

TEST_CASE("pure death from x0=1 makes exactly one jump and absorbs") {
  CtmcModel m;
  m.add_jump(-1, RationalRate::falling_monomial(Rat(1), 1));
  Trajectory t = simulate(m, 1, 100.0, 7);
  CHECK(t.terminated_by == Trajectory::Termination::Absorbed);
  REQUIRE(t.states.size() == 2);
  CHECK(t.states[0] == 1);
  CHECK(t.states[1] == 0);
  CHECK(t.times[1] > 0);
  CHECK(t.state_at(t.times[1] + 5) == 0);  // last state carried forward
}

TEST_CASE("fixed seed reproducibility, distinct streams differ") {
  CtmcModel m = mm1_model();
  Trajectory a = simulate(m, 3, 50.0, 12345);
  Trajectory b = simulate(m, 3, 50.0, 12345);
  CHECK(a.times == b.times);
  CHECK(a.states == b.states);
  CHECK(a.terminated_by == b.terminated_by);

  Trajectory c = simulate(m, 3, 50.0, 12346);
  CHECK(a.times != c.times);

  CHECK(rng::stream_seed(1, 0) != rng::stream_seed(1, 1));
  CHECK(rng::stream_seed(1, 0) != rng::stream_seed(2, 0));
}

TEST_CASE("first waiting time follows the exponential law") {
  CtmcModel m;
  m.add_jump(1, RationalRate::constant(Rat(3)));
  m.add_jump(-1, RationalRate::from_monomial(MonomialPoly({Rat(0), Rat(2)}),
                                             MonomialPoly({Rat(1), Rat(1)})));
  // q(2) = 3 + 4/3
  const double q = 3.0 + 4.0 / 3.0;
  const long n = 100'000;
  CachedRates rates(m);
  double sum = 0;
  for (long k = 0; k < n; ++k) {
    rng::Stream stream(rng::stream_seed(99, static_cast<std::uint64_t>(k)));
    sum += stream.exponential(rates.total(2));
  }
  double mean = sum / static_cast<double>(n);
  double se = (1.0 / q) / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean - 1.0 / q) <= 3 * se);
}

TEST_CASE("trajectory invariants: increasing times, steps in Gamma, states >= 0") {
  CtmcModel m;
  m.add_jump(2, RationalRate::constant(Rat(1)));
  m.add_jump(-3, RationalRate::falling_monomial(Rat(1, 2), 1));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Trajectory t = simulate(m, 4, 50.0, rng::stream_seed(1234, seed));
    for (std::size_t k = 1; k < t.times.size(); ++k) {
      CHECK(t.times[k] > t.times[k - 1]);
      long step = t.states[k] - t.states[k - 1];
      CHECK((step == 2 || step == -3));
      CHECK(t.states[k] >= 0);
    }
  }
}

TEST_CASE("jump selection follows the rate proportions") {
  CtmcModel m;
  m.add_jump(1, RationalRate::constant(Rat(3)));
  m.add_jump(-1, RationalRate::from_monomial(MonomialPoly({Rat(0), Rat(2)}),
                                             MonomialPoly({Rat(1), Rat(1)})));
  // at x=2 the rates are 3 and 4/3, so P(+1) = 9/13
  const long n = 100'000;
  long up = 0;
  for (long k = 0; k < n; ++k) {
    Trajectory t = simulate(m, 2, 1e9, rng::stream_seed(606, k), 1);
    if (t.states[1] == 3) ++up;
  }
  double p = static_cast<double>(up) / static_cast<double>(n);
  double expected = 9.0 / 13.0;
  double se = std::sqrt(expected * (1 - expected) / static_cast<double>(n));
  CHECK(std::abs(p - expected) <= 3 * se);
}

TEST_CASE("two-state occupation law at t=1") {
  // rates 1 <-> 1 on {0,1}: P(X(1)=0 | X0=0) = (1 + e^{-2})/2
  struct TableRates {
    std::vector<int> etas{1, -1};
    std::size_t jump_count() const { return 2; }
    int eta(std::size_t k) const { return etas[k]; }
    double total(long) { return 1.0; }
    double rate(long x, std::size_t k) const {
      if (x == 0) return k == 0 ? 1.0 : 0.0;
      return k == 1 ? 1.0 : 0.0;
    }
  } rates;
  const long n = 100'000;
  long at_zero = 0;
  for (long k = 0; k < n; ++k) {
    rng::Stream stream(rng::stream_seed(4242, static_cast<std::uint64_t>(k)));
    long x = 0;
    double t = 0;
    detail::ssa_run(rates, 0, 1.0, stream, 1'000'000, x, t, [](double, long) {});
    if (x == 0) ++at_zero;
  }
  double p = static_cast<double>(at_zero) / static_cast<double>(n);
  double expected = 0.5 * (1.0 + std::exp(-2.0));
  double se = std::sqrt(expected * (1 - expected) / static_cast<double>(n));
  CHECK(std::abs(p - expected) <= 3 * se);
}

TEST_CASE("empirical distribution basics") {
  Trajectory constant;
  constant.times = {0.0};
  constant.states = {5};
  std::vector<Trajectory> runs(40, constant);
  Distribution d = empirical_dist(runs, 3.0);
  CHECK(d(5) == 1.0);

  // t = 0 is the point mass at x0
  CtmcModel m = mm1_model();
  std::vector<Trajectory> sims;
  for (int k = 0; k < 20; ++k)
    sims.push_back(simulate(m, 7, 5.0, rng::stream_seed(5, k)));
  Distribution at0 = empirical_dist(sims, 0.0);
  CHECK(at0(7) == 1.0);

  // jump_cap runs are excluded and counted
  Trajectory capped = constant;
  capped.terminated_by = Trajectory::Termination::JumpCap;
  runs.push_back(capped);
  long excluded = 0;
  d = empirical_dist(runs, 1.0, &excluded);
  CHECK(excluded == 1);
  CHECK(d(5) == 1.0);
  std::vector<Trajectory> all_capped{capped};
  CHECK_THROWS(empirical_dist(all_capped, 1.0));
}

TEST_CASE("total variation distance") {
  Distribution p(std::vector<double>{0.5, 0.5});
  Distribution q(std::vector<double>{1.0});
  CHECK(tv_distance(p, p) == 0.0);
  CHECK(tv_distance(p, q) == doctest::Approx(0.5));
  Distribution r(std::vector<double>{0.0, 0.0, 1.0});
  Distribution s(std::vector<double>{1.0});
  CHECK(tv_distance(r, s) == doctest::Approx(1.0));  // disjoint supports
}

TEST_CASE("M/M/1 ensemble at large t matches the stationary law") {
  CtmcModel m = mm1_model();
  EnsembleStats stats = run_ensemble(m, 0, {40.0}, 50'000, 2024);
  Distribution pi = stationary_truncated(m, 200).dist;
  CHECK(tv_distance(stats.dists[0], pi) <= 0.02);
}

TEST_CASE("streaming ensemble matches stored trajectories draw for draw") {
  CtmcModel m = mm1_model();
  std::vector<double> times{1.0, 3.0};
  EnsembleOptions opts;
  opts.threads = 2;
  EnsembleStats stats = run_ensemble(m, 4, times, 200, 909, opts);
  std::vector<Trajectory> runs;
  for (long k = 0; k < 200; ++k)
    runs.push_back(simulate(m, 4, times.back() + 1e-12, rng::stream_seed(909, k)));
  for (std::size_t i = 0; i < times.size(); ++i) {
    Distribution direct = empirical_dist(runs, times[i]);
    REQUIRE(direct.mass.size() == stats.dists[i].mass.size());
    CHECK(direct.mass == stats.dists[i].mass);
  }
}

TEST_CASE("ensemble reduction is independent of thread count") {
  CtmcModel m = mm1_model();
  EnsembleOptions one, four;
  one.threads = 1;
  four.threads = 4;
  EnsembleStats a = run_ensemble(m, 2, {1.0, 5.0}, 2000, 77, one);
  EnsembleStats b = run_ensemble(m, 2, {1.0, 5.0}, 2000, 77, four);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  for (std::size_t i = 0; i < a.dists.size(); ++i)
    CHECK(a.dists[i].mass == b.dists[i].mass);
}

TEST_CASE("jump cap flags runaway trajectories") {
  CtmcModel m;
  m.add_jump(1, RationalRate::falling_monomial(Rat(1), 3));  // rate x(x-1)(x-2)
  TerminationCounts counts = count_terminations(m, 10, 1.0, 50, 11, 10'000);
  CHECK(counts.jump_cap == 50);

  Trajectory t = simulate(m, 10, 1.0, 3, 500);
  CHECK(t.terminated_by == Trajectory::Termination::JumpCap);
  CHECK(t.states.size() == 501);
}

TEST_CASE("tv_decay is self-consistent at the final time") {
  CtmcModel m = mm1_model();
  std::vector<double> times = coarse_times();
  // reference = empirical law of the same ensemble at the final time
  EnsembleStats stats = run_ensemble(m, 10, times, 4000, rng::stream_seed(321, 0));
  TvDecayOptions opts;
  opts.noise_floor_factor = 0.0;  // keep every point
  TvDecayResult res = tv_decay(m, {10}, times, 4000, stats.dists.back(), 321, opts);
  CHECK(res.rows.back().tv == 0.0);
}
