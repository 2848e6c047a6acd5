#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ctmc1d/bd_oracle.hpp>
#include <ctmc1d/experiments.hpp>
#include <ctmc1d/master_eq.hpp>
#include <ctmc1d/ssa.hpp>

#include <random>

using namespace ctmc1d;

namespace {

CtmcModel unit_bd(const RationalRate& b, const RationalRate& d) {
  CtmcModel m;
  m.add_jump(1, b);
  m.add_jump(-1, d);
  return m;
}

CtmcModel reduced_example() {
  return reduce(reduction_example_network(Rat(100), Rat(1000)), reduction_example_qss());
}

}  // namespace

TEST_CASE("M/M/1 stationary solve matches the geometric law") {
  CtmcModel m = unit_bd(RationalRate::constant(Rat(1)), RationalRate::constant(Rat(2)));
  StationaryResult res = stationary_truncated(m, 200);
  for (long x = 0; x <= 200; ++x) {
    double expected = std::pow(0.5, static_cast<double>(x + 1));
    CHECK(std::abs(res.dist(x) - expected) <= 1e-10);
  }
  CHECK(res.max_residual <= 1e-10);
  CHECK(res.boundary_mass < 1e-12);
  CHECK(res.warnings.empty());
}

TEST_CASE("detailed balance: solver equals the product form") {
  std::mt19937_64 eng(97);
  std::uniform_int_distribution<long> cd(0, 4);
  std::uniform_int_distribution<int> degd(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    auto rand_rate = [&] {
      std::vector<Rat> num(degd(eng) + 1, Rat(0));
      for (auto& c : num) c = rat_of(cd(eng), 1 + cd(eng));
      num.back() += 1;
      num.front() += 1;
      return RationalRate(FallingPoly(num), FallingPoly::constant(Rat(1)));
    };
    BirthDeathModel bd(rand_rate(), rand_rate());
    CtmcModel m = unit_bd(bd.b, bd.d);
    StationaryResult res = stationary_truncated(m, 200);
    CHECK(tv_distance(res.dist, bd_stationary(bd, 200)) <= 1e-10);
    CHECK(res.max_residual <= 1e-9);
  }
}

TEST_CASE("the exponential MM example has negligible boundary mass at N=300") {
  StationaryResult res = stationary_truncated(mm_exponential_example(), 300);
  CHECK(res.max_residual <= 1e-10);
  CHECK(res.boundary_mass < 1e-6);
  CHECK(res.warnings.empty());
}

TEST_CASE("truncation stability for positive-recurrent models") {
  CtmcModel mm1 = unit_bd(RationalRate::constant(Rat(1)), RationalRate::constant(Rat(2)));
  for (const CtmcModel& m :
       {mm_exponential_example(), haldane_nonexponential_example(), mm1}) {
    StationaryResult small = stationary_truncated(m, 200);
    StationaryResult big = stationary_truncated(m, 400);
    double tv_half = 0;
    for (long x = 0; x <= 100; ++x) tv_half += std::abs(small.dist(x) - big.dist(x));
    CHECK(tv_half / 2 <= 1e-8);
  }
  // a power-tailed law equilibrates only like 1/N; doubling N must shrink
  // the lower-half discrepancy accordingly
  StationaryResult a = stationary_truncated(reduced_example(), 200);
  StationaryResult b = stationary_truncated(reduced_example(), 400);
  StationaryResult c = stationary_truncated(reduced_example(), 800);
  auto half_tv = [](const StationaryResult& p, const StationaryResult& q) {
    double acc = 0;
    for (long x = 0; x <= 100; ++x) acc += std::abs(p.dist(x) - q.dist(x));
    return acc / 2;
  };
  CHECK(half_tv(b, c) < half_tv(a, b));
}

TEST_CASE("desk-scale truncation stays accurate") {
  CtmcModel m = unit_bd(RationalRate::constant(Rat(3)),
                        RationalRate::falling_monomial(Rat(1, 2), 1));  // M/M/inf mean 6
  StationaryResult res = stationary_truncated(m, 10'000);
  CHECK(res.max_residual <= 1e-10);
  CHECK(res.dist.mean() == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(res.boundary_mass < 1e-12);
}

TEST_CASE("R>=1 engine verdicts are corroborated by the solver") {
  // logistic-style mass-action: 0 -> A (5), A -> 0 (x), 2A -> A (x(x-1)/2)
  CtmcModel m;
  m.add_jump(1, RationalRate::constant(Rat(5)));
  m.add_jump(-1, RationalRate(FallingPoly({Rat(0), Rat(1), Rat(1, 2)}),
                              FallingPoly::constant(Rat(1))));
  Verdict v = classify_model(m);
  CHECK(v.explosivity == Explosivity::NonExplosive);
  CHECK(v.recurrence == Recurrence::PositiveRecurrent);
  CHECK(v.ergodicity_speed == ErgodicitySpeed::Exponential);
  StationaryResult res = stationary_truncated(m, 200);
  CHECK(res.boundary_mass < 1e-10);
  CHECK(res.dist.mean() > 1.0);

  // transient linear birth dominance: the solved mass escapes to the boundary
  CtmcModel trans;
  trans.add_jump(1, RationalRate::falling_monomial(Rat(2), 1));
  trans.add_jump(-1, RationalRate::falling_monomial(Rat(1), 1));
  trans.add_jump(1, RationalRate::constant(Rat(1)));  // keep 0 non-absorbing
  Verdict vt = classify_model(trans);
  CHECK(vt.recurrence == Recurrence::Transient);
  CHECK(vt.explosivity == Explosivity::NonExplosive);  // R = 1
  StationaryResult rt = stationary_truncated(trans, 300);
  CHECK(rt.boundary_mass > 0.5);
  CHECK(!rt.warnings.empty());
}

TEST_CASE("solver rejects bad truncations") {
  CtmcModel m = unit_bd(RationalRate::constant(Rat(1)), RationalRate::constant(Rat(2)));
  CHECK_THROWS(stationary_truncated(m, 1));  // N must exceed max |eta|

  // parity-disconnected jump set {+2, -2} has a singular balance system
  CtmcModel parity;
  parity.add_jump(2, RationalRate::constant(Rat(1)));
  parity.add_jump(-2, RationalRate::falling_monomial(Rat(1), 2));
  CHECK_THROWS(stationary_truncated(parity, 50));
}

TEST_CASE("tail index separates geometric, Poisson, and power tails") {
  // geometric rho = 1/2: log pi vs x slope = log(1/2)
  BirthDeathModel mm1(RationalRate::constant(Rat(1)), RationalRate::constant(Rat(2)));
  TailIndex geom = tail_index(bd_stationary(mm1, 120));
  CHECK(geom.slope_vs_x == doctest::Approx(std::log(0.5)).epsilon(0.01));

  // Poisson(1): factorial decay is steeper than any fixed geometric slope,
  // and steepens as the window grows (fit floor lowered: the law keeps only
  // 17 states above the default 1e-14)
  BirthDeathModel inf(RationalRate::constant(Rat(1)), RationalRate::falling_monomial(Rat(1), 1));
  TailIndex p50 = tail_index(bd_stationary(inf, 50), 1e-250);
  TailIndex p100 = tail_index(bd_stationary(inf, 100), 1e-250);
  CHECK(p100.slope_vs_x < p50.slope_vs_x);
  CHECK(p50.slope_vs_x < -2);

  // the reduced example has a power-like tail: finite log-log slope
  StationaryResult res = stationary_truncated(reduced_example(), 2000);
  TailIndex power = tail_index(res.dist);
  CHECK(power.slope_vs_log_x > -4.0);
  CHECK(power.slope_vs_log_x < -1.0);

  Distribution degenerate(std::vector<double>(5, 0.2));
  CHECK_THROWS(tail_index(degenerate));  // needs 20 support points
}
