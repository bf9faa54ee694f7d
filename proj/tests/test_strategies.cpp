#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <set>

#include "acmde/error.hpp"
#include "acmde/strategies.hpp"
#include "support/scripted_random.hpp"

using namespace acmde;
using acmde::testing::ScriptedSource;

namespace {

Population line_population(std::size_t np, std::size_t d) {
  Population pop;
  for (std::size_t i = 0; i < np; ++i) {
    Individual ind;
    ind.x.assign(d, static_cast<double>(i));
    ind.fitness = static_cast<double>(i);  // member 0 is best
    pop.members.push_back(ind);
  }
  return pop;
}

}  // namespace

TEST_CASE("mutation arithmetic") {
  const Vector r1{1, 2}, r2{3, 4}, r3{1, 1};
  SUBCASE("rand/1") {
    MutationInputs in;
    in.donors = {r1, r2, r3};
    in.f = 0.5;
    CHECK(combine(StrategyKind::rand1, in) == Vector{2.0, 3.5});
  }
  SUBCASE("best/1 with F = 0 returns the best") {
    const Vector best{7, -3};
    MutationInputs in;
    in.best = best;
    in.donors = {r1, r2};
    in.f = 0.0;
    CHECK(combine(StrategyKind::best1, in) == best);
  }
  SUBCASE("current-to-best/1") {
    const Vector xi{0, 0}, best{2, 2}, a{1, 0}, b{0, 1};
    MutationInputs in;
    in.target = xi;
    in.best = best;
    in.donors = {a, b};
    in.f = 0.5;
    CHECK(combine(StrategyKind::current_to_best1, in) == Vector{1.5, 0.5});
  }
  SUBCASE("current-to-rand/1 with K = 1, F = 0 returns the first donor") {
    const Vector xi{5, 5};
    MutationInputs in;
    in.target = xi;
    in.donors = {r1, r2, r3};
    in.f = 0.0;
    in.k = 1.0;
    CHECK(combine(StrategyKind::current_to_rand1, in) == r1);
  }
  SUBCASE("rand/2 and current-to-best/2") {
    const Vector r4{0, 2}, r5{2, 0}, xi{1, 1}, best{3, 3};
    MutationInputs in;
    in.target = xi;
    in.best = best;
    in.donors = {r1, r2, r3, r4, r5};
    in.f = 0.5;
    // r1 + F(r2 - r3) + F(r4 - r5)
    CHECK(combine(StrategyKind::rand2, in) == Vector{1.0, 4.5});
    MutationInputs cb = in;
    cb.donors = {r1, r2, r3, r4};
    // xi + F(best - xi) + F(r1 - r2) + F(r3 - r4)
    CHECK(combine(StrategyKind::current_to_best2, cb) == Vector{1.5, 0.5});
  }
}

TEST_CASE("donors are distinct and exclude the target") {
  const Population pop = line_population(12, 3);
  const Bounds b = Bounds::uniform(3, -100.0, 100.0);
  const GenerationView view = make_full_view(pop, b);
  Mt64Source rng(2024);
  for (StrategyKind kind : {StrategyKind::rand1, StrategyKind::best1, StrategyKind::current_to_best1,
                            StrategyKind::current_to_rand1, StrategyKind::rand2,
                            StrategyKind::current_to_best2, StrategyKind::current_to_pbest1,
                            StrategyKind::best2}) {
    StrategySpec spec;
    spec.kind = kind;
    bool ok = true;
    for (int k = 0; k < 100000 / 8; ++k) {
      const std::size_t i = rng.index(pop.size());
      const DonorDraw d = draw_donors(view, i, spec, rng);
      std::set<std::size_t> seen;
      for (std::size_t r = 0; r < d.count; ++r) {
        ok = ok && d.r[r] != i && d.r[r] < pop.size() && seen.insert(d.r[r]).second;
      }
      ok = ok && d.count == donor_count(kind);
      if (kind == StrategyKind::current_to_rand1) ok = ok && d.k >= 0.0 && d.k < 1.0;
    }
    CHECK_MESSAGE(ok, to_string(kind));
  }
}

TEST_CASE("too few members is a configuration error") {
  const Population pop = line_population(5, 2);
  const Bounds b = Bounds::uniform(2, -100.0, 100.0);
  const GenerationView view = make_full_view(pop, b);
  Mt64Source rng(1);
  StrategySpec spec;
  spec.kind = StrategyKind::rand2;
  CHECK_THROWS_AS(make_trial(view, 0, spec, rng), ConfigError);
  spec.kind = StrategyKind::rand1;
  CHECK_NOTHROW(make_trial(view, 0, spec, rng));
}

TEST_CASE("current-to-pbest with a single-member pool matches current-to-best/1") {
  const Population pop = line_population(10, 4);
  const Bounds b = Bounds::uniform(4, -100.0, 100.0);
  const GenerationView view = make_full_view(pop, b);

  StrategySpec pbest;
  pbest.kind = StrategyKind::current_to_pbest1;
  pbest.p = 0.05;  // ceil(0.5) = 1
  REQUIRE(pbest_pool_size(pbest.p, 10) == 1);
  StrategySpec cbest;
  cbest.kind = StrategyKind::current_to_best1;

  ScriptedSource a;
  a.indices = {0, 3, 7};  // pool pick, r1, r2
  ScriptedSource c;
  c.indices = {3, 7};
  CHECK(mutate(view, 5, pbest, a) == mutate(view, 5, cbest, c));
}

TEST_CASE("p-best pool size") {
  CHECK(pbest_pool_size(0.3, 10) == 3);
  CHECK(pbest_pool_size(0.1, 100) == 10);
  CHECK(pbest_pool_size(0.01, 10) == 1);
  CHECK(pbest_pool_size(1.0, 7) == 7);
  CHECK(pbest_pool_size(0.25, 10) == 3);
}

TEST_CASE("binomial crossover") {
  const Vector target{0, 0, 0}, mutant{1, 1, 1};
  CHECK(crossover_binomial(target, mutant, 0.5, 1, Vector{0.9, 0.9, 0.1}) == Vector{0, 1, 1});
  CHECK(crossover_binomial(target, mutant, 1.0, 0, Vector{0.99, 0.5, 0.0}) == mutant);
  CHECK(crossover_binomial(target, mutant, 0.0, 2, Vector{0.0, 0.0, 0.0}) == Vector{0, 0, 1});
}

TEST_CASE("binomial crossover laws") {
  constexpr std::size_t d = 30;
  constexpr double cr = 0.5;
  const Vector target(d, 0.0), mutant(d, 1.0);
  Mt64Source rng(31);
  double taken = 0.0;
  bool forced = true;
  constexpr int trials = 100000;
  for (int k = 0; k < trials; ++k) {
    const Vector t = crossover_binomial(target, mutant, cr, rng);
    double h = 0.0;
    for (double v : t) h += v;
    forced = forced && h >= 1.0;
    taken += h;
  }
  CHECK(forced);
  const double expected = cr + (1.0 - cr) / d;
  CHECK(std::abs(taken / (trials * d) - expected) < 0.01);
}

TEST_CASE("exponential crossover") {
  const Vector target(4, 0.0), mutant(4, 1.0);
  // Start at the third component, three long, wrapping to the first.
  CHECK(crossover_exponential(target, mutant, ExponentialSegment{2, 3}) == Vector{1, 0, 1, 1});

  ScriptedSource zero;
  zero.indices = {1};
  zero.uniform_fallback = 0.0;  // the loop test still draws once
  const auto seg0 = draw_exponential_segment(4, 0.0, zero);
  CHECK(seg0.length == 1);
  CHECK(seg0.start == 1);

  ScriptedSource one;
  one.indices = {0};
  one.uniform_fallback = 0.3;
  CHECK(draw_exponential_segment(4, 1.0, one).length == 4);
  ScriptedSource full;
  full.indices = {3};
  full.uniform_fallback = 0.3;
  CHECK(crossover_exponential(target, mutant, 1.0, full) == mutant);
}

TEST_CASE("exponential segment length follows the truncated geometric law") {
  constexpr std::size_t d = 10;
  constexpr double cr = 0.7;
  constexpr int trials = 100000;
  Mt64Source rng(77);
  std::vector<double> counts(d + 1, 0.0);
  for (int k = 0; k < trials; ++k) counts[draw_exponential_segment(d, cr, rng).length] += 1.0;

  double chi2 = 0.0;
  for (std::size_t l = 1; l <= d; ++l) {
    const double p = l < d ? std::pow(cr, double(l - 1)) * (1.0 - cr) : std::pow(cr, double(d - 1));
    const double e = p * trials;
    chi2 += (counts[l] - e) * (counts[l] - e) / e;
  }
  const boost::math::chi_squared dist(static_cast<double>(d - 1));
  const double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  CHECK(p_value > 0.01);
}

TEST_CASE("strategy names round-trip") {
  for (StrategyKind kind : {StrategyKind::rand1, StrategyKind::best1, StrategyKind::current_to_best1,
                            StrategyKind::current_to_rand1, StrategyKind::rand2,
                            StrategyKind::current_to_best2, StrategyKind::current_to_pbest1,
                            StrategyKind::best2}) {
    CHECK(parse_strategy(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_strategy("rand/3"), ConfigError);
  CHECK(parse_crossover("bin") == CrossoverKind::binomial);
  CHECK(parse_crossover("exp") == CrossoverKind::exponential);
}

TEST_CASE("strategy spec validation") {
  StrategySpec s;
  CHECK_NOTHROW(s.validate());
  s.cr = 1.5;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.kind = StrategyKind::current_to_rand1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.crossover = CrossoverKind::none;
  CHECK_NOTHROW(s.validate());
  s.p = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("trials stay inside the box") {
  const Bounds b = Bounds::uniform(3, -1.0, 1.0);
  Population pop;
  Mt64Source rng(5);
  pop = initialize(b, 10, rng);
  for (auto& m : pop.members) m.fitness = rng.uniform();
  const GenerationView view = make_full_view(pop, b);
  StrategySpec s;
  s.f = 2.5;  // large steps to force repairs
  for (int k = 0; k < 2000; ++k) CHECK(b.contains(make_trial(view, rng.index(10), s, rng)));
}
