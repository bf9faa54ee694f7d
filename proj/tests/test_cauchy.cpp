#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "acmde/bench.hpp"
#include "acmde/cauchy.hpp"
#include "acmde/error.hpp"
#include "acmde/optimizer.hpp"
#include "support/scripted_random.hpp"

using namespace acmde;
using acmde::testing::ScriptedSource;
using doctest::Approx;

namespace {

Individual member(Vector x, double f, std::size_t fc = 0) {
  Individual ind;
  ind.x = std::move(x);
  ind.fitness = f;
  ind.fc = fc;
  return ind;
}

Population evaluated_population(std::size_t np, std::size_t d, std::uint64_t seed) {
  Mt64Source rng(seed);
  const Bounds b = Bounds::uniform(d, -5.0, 5.0);
  Population pop = initialize(b, np, rng);
  for (auto& m : pop.members) m.fitness = sphere(m.x);
  return pop;
}

}  // namespace

TEST_CASE("density") {
  CHECK(cauchy_pdf(3.0, {3.0, 1.0}) == Approx(1.0 / std::numbers::pi));
  CHECK(cauchy_pdf(2.5, {2.0, 0.5}) == Approx(1.0 / (2.0 * std::numbers::pi * 0.5)));
  CHECK(cauchy_pdf(0.2, {0.0, 0.1}) == Approx(0.6366198).epsilon(1e-7));
  CHECK_THROWS_AS(cauchy_pdf(0.0, {0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(cauchy_pdf(0.0, {0.0, -1.0}), ConfigError);
}

TEST_CASE("distribution function") {
  CHECK(cauchy_cdf(1.5, {1.5, 2.0}) == 0.5);
  CHECK(cauchy_cdf(3.5, {1.5, 2.0}) == Approx(0.75));
  CHECK(cauchy_cdf(-1.0, {0.0, 1.0}) == Approx(0.25));
  CHECK_THROWS_AS(cauchy_cdf(0.0, {0.0, 0.0}), ConfigError);
  double prev = 0.0;
  for (double x = -50.0; x <= 50.0; x += 0.5) {
    const double c = cauchy_cdf(x, {0.0, 1.0});
    CHECK(c > prev);
    CHECK(c < 1.0);
    prev = c;
  }
}

TEST_CASE("inverse-transform sampling") {
  ScriptedSource rng;
  rng.open_uniforms = {0.5, 0.75, 0.9};
  CHECK(cauchy_sample({4.0, 2.0}, rng) == 4.0);
  CHECK(cauchy_sample({0.0, 1.0}, rng) == Approx(1.0));
  CHECK(cauchy_sample({0.0, 0.1}, rng) == Approx(0.307768).epsilon(1e-6));
}

TEST_CASE("sampler matches the analytic distribution") {
  Mt64Source rng(4242);
  const CauchyParams params{0.0, 1.0};
  std::vector<double> xs(100000);
  for (auto& x : xs) x = cauchy_sample(params, rng);
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double c = cauchy_cdf(xs[k], params);
    ks = std::max({ks, std::abs(c - k / n), std::abs((k + 1) / n - c)});
  }
  CHECK(ks < 0.02);
}

TEST_CASE("sigmoid schedule values") {
  const ScheduleSpec sftd{ScheduleFamily::sftd, 100.0, 5.0, -6.0, 6.0};
  CHECK(std::abs(threshold(sftd, 0, 100) - 99.7651) < 1e-3);
  CHECK(std::abs(threshold(sftd, 50, 100) - 52.5) < 1e-12);
  CHECK(std::abs(threshold(sftd, 100, 100) - 5.2349) < 1e-3);
  const ScheduleSpec lftd{ScheduleFamily::lftd, 100.0, 5.0, -6.0, 6.0};
  CHECK(threshold(lftd, 25, 100) == Approx(76.25));
  CHECK(threshold(ScheduleSpec::constant(5.0), 17, 100) == 5.0);
  CHECK_THROWS_AS(threshold(sftd, 101, 100), std::invalid_argument);
  CHECK_THROWS_AS(threshold(sftd, 0, 0), std::invalid_argument);
}

TEST_CASE("schedule monotonicity and mirror symmetry") {
  const ScheduleSpec sftd{ScheduleFamily::sftd, 100.0, 5.0, -6.0, 6.0};
  const ScheduleSpec sfti{ScheduleFamily::sfti, 5.0, 100.0, -6.0, 6.0};
  const ScheduleSpec lftd{ScheduleFamily::lftd, 100.0, 5.0, -6.0, 6.0};
  const ScheduleSpec lfti{ScheduleFamily::lfti, 5.0, 100.0, -6.0, 6.0};
  const std::size_t g_max = 997;
  for (std::size_t g = 0; g <= g_max; ++g) {
    CHECK(std::abs(threshold(sftd, g, g_max) + threshold(sfti, g, g_max) - 105.0) < 1e-12);
    if (g > 0) {
      CHECK(threshold(sftd, g, g_max) <= threshold(sftd, g - 1, g_max));
      CHECK(threshold(lftd, g, g_max) <= threshold(lftd, g - 1, g_max));
      CHECK(threshold(sfti, g, g_max) >= threshold(sfti, g - 1, g_max));
      CHECK(threshold(lfti, g, g_max) >= threshold(lfti, g - 1, g_max));
    }
  }
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS((ScheduleSpec{ScheduleFamily::sftd, 5.0, 100.0}.validate()), ConfigError);
  CHECK_THROWS_AS((ScheduleSpec{ScheduleFamily::sfti, 100.0, 5.0}.validate()), ConfigError);
  CHECK_THROWS_AS((ScheduleSpec{ScheduleFamily::lftd, 0.5, 0.5}.validate()), ConfigError);
  CHECK_NOTHROW(ScheduleSpec::constant(5.0).validate());
  CHECK(parse_schedule_family("sftd") == ScheduleFamily::sftd);
  CHECK(parse_schedule_family("LFTI") == ScheduleFamily::lfti);
  CHECK_THROWS_AS(parse_schedule_family("cubic"), ConfigError);
}

TEST_CASE("firing rule") {
  CHECK_FALSE(should_fire(0, 5.0));
  CHECK_FALSE(should_fire(0, 1.0));
  CHECK(should_fire(5, 5.0));
  CHECK_FALSE(should_fire(7, 5.0));
  CHECK(should_fire(10, 5.0));
  CHECK(integer_threshold(52.5) == 53);
  CHECK(integer_threshold(5.2349) == 5);
  CHECK(integer_threshold(0.2) == 1);
}

TEST_CASE("a permanently failing member fires every T failures") {
  for (std::size_t t : {1u, 3u, 5u, 17u}) {
    for (std::size_t final_fc : {0u, 4u, 33u, 100u}) {
      std::size_t fires = 0;
      for (std::size_t fc = 1; fc <= final_fc; ++fc) fires += should_fire(fc, double(t));
      CHECK(fires == final_fc / t);
    }
  }
}

TEST_CASE("best-centred Cauchy trial") {
  const Bounds b = Bounds::uniform(2, -10.0, 10.0);
  SUBCASE("hand-evaluated example") {
    ScriptedSource rng;
    rng.indices = {1};
    rng.uniforms = {0.4, 0.9};
    rng.open_uniforms = {0.75, 0.75};
    const Vector t = cm_trial(member({0, 0}, 1.0), member({1, 1}, 0.0), b, rng);
    CHECK(t[0] == Approx(1.1));
    CHECK(t[1] == Approx(1.1));
    CHECK(rng.open_uniforms.empty());
  }
  SUBCASE("only the forced component at the median") {
    ScriptedSource rng;
    rng.indices = {0};
    rng.uniforms = {0.7, 0.5};
    rng.open_uniforms = {0.5};
    const Vector t = cm_trial(member({3, 4}, 1.0), member({1, 2}, 0.0), b, rng);
    CHECK(t == Vector{1, 4});
  }
  SUBCASE("every component at the median") {
    ScriptedSource rng;
    rng.indices = {0};
    rng.uniforms = {0.1, 0.49};
    rng.open_uniforms = {0.5, 0.5};
    CHECK(cm_trial(member({3, 4}, 1.0), member({1, 2}, 0.0), b, rng) == Vector{1, 2});
  }
  SUBCASE("exactly 0.5 does not fire") {
    ScriptedSource rng;
    rng.indices = {1};
    rng.uniforms = {0.5, 0.5};
    rng.open_uniforms = {0.5};
    CHECK(cm_trial(member({3, 4}, 1.0), member({1, 2}, 0.0), b, rng) == Vector{3, 2});
  }
}

TEST_CASE("advanced Cauchy trial") {
  const Bounds b = Bounds::uniform(4, -10.0, 10.0);
  Population pop;
  for (int i = 9; i >= 0; --i) pop.members.push_back(member(Vector(4, double(i)), double(i)));
  const GenerationView view = make_full_view(pop, b);  // best is member 9, at the origin
  const Individual& target = pop.members[0];

  SUBCASE("single-member pool, high rate, medians reproduce the best") {
    AcmConfig cfg;
    cfg.p = 0.05;
    ScriptedSource rng;
    rng.indices = {0, 1, 2};  // pool pick, rate 0.9, j_rand
    rng.uniforms = {0.9, 0.2, 0.5, 0.0};
    rng.open_fallback = 0.5;
    CHECK(acm_trial(target, view, cfg, rng) == Vector(4, 0.0));
  }
  SUBCASE("low rate leaves only the forced component") {
    AcmConfig cfg;
    ScriptedSource rng;
    rng.indices = {0, 0, 2};  // rate 0.1, j_rand is the third component
    rng.uniforms = {0.2, 0.5, 0.11, 0.99};
    rng.open_fallback = 0.5;
    CHECK(acm_trial(target, view, cfg, rng) == Vector{9, 9, 0, 9});
  }
  SUBCASE("the rate test is inclusive") {
    AcmConfig cfg;
    ScriptedSource rng;
    rng.indices = {0, 0, 0};
    rng.uniforms = {0.5, 0.1, 0.5, 0.5};
    rng.open_fallback = 0.5;
    CHECK(acm_trial(target, view, cfg, rng) == Vector{0, 0, 9, 9});
  }
  SUBCASE("the centre comes from the top ceil(p n) members") {
    CHECK(pbest_pool_size(0.3, 10) == 3);
    AcmConfig cfg;
    cfg.p = 0.3;
    Mt64Source rng(3);
    std::vector<int> hits(10, 0);
    for (int k = 0; k < 3000; ++k) {
      ScriptedSource s;
      s.indices = {rng.index(3), 1, 0};
      s.uniform_fallback = 0.0;
      s.open_fallback = 0.5;
      const Vector t = acm_trial(target, view, cfg, s);
      hits[static_cast<int>(t[0])]++;
    }
    CHECK(hits[0] > 800);
    CHECK(hits[1] > 800);
    CHECK(hits[2] > 800);
    CHECK(hits[0] + hits[1] + hits[2] == 3000);
  }
}

TEST_CASE("Cauchy trials always perturb at least one component") {
  const Bounds b = Bounds::uniform(6, -100.0, 100.0);
  Population pop = evaluated_population(10, 6, 8);
  const GenerationView view = make_full_view(pop, b);
  Mt64Source rng(8);
  AcmConfig cfg;
  for (int k = 0; k < 2000; ++k) {
    const Individual& t = pop.members[rng.index(10)];
    const Vector a = acm_trial(t, view, cfg, rng);
    const Vector c = cm_trial(t, pop.members[view.best()], b, rng);
    CHECK(a != t.x);
    CHECK(c != t.x);
  }
}

TEST_CASE("generation step with the advanced Cauchy wrapper") {
  const Bounds b = Bounds::uniform(5, -5.0, 5.0);
  StrategySpec base;
  auto run_step = [&](Population pop, const AcmConfig& cfg, std::uint64_t seed) {
    Mt64Source rng(seed);
    Evaluator eval([](std::span<const double> x) { return sphere(x); }, 1000);
    const StepReport r = acm_de_step(pop, b, base, cfg, eval, rng, 50);
    return std::make_pair(pop, r);
  };

  SUBCASE("unreachable threshold behaves like plain DE") {
    Population pop = evaluated_population(10, 5, 11);
    for (auto& m : pop.members) m.fc = 40;
    AcmConfig huge;
    huge.schedule = ScheduleSpec::constant(1e9);
    const auto [acm_pop, acm_report] = run_step(pop, huge, 5);

    ClassicEngine plain(base);
    Population pop2 = pop;
    Mt64Source rng(5);
    Evaluator eval([](std::span<const double> x) { return sphere(x); }, 1000);
    plain.reset(pop2, rng);
    step(pop2, b, plain, CauchyOptions{}, eval, rng, 50);
    CHECK(acm_report.cauchy_trials == 0);
    for (std::size_t i = 0; i < pop2.size(); ++i) CHECK(acm_pop.members[i].x == pop2.members[i].x);
  }
  SUBCASE("fresh counters never take the Cauchy branch") {
    const auto [p, r] = run_step(evaluated_population(10, 5, 12), AcmConfig{}, 6);
    CHECK(r.cauchy_trials == 0);
    CHECK(r.engine_trials == 10);
    CHECK(p.g == 1);
  }
  SUBCASE("one member at the threshold takes the Cauchy branch") {
    Population pop = evaluated_population(10, 5, 13);
    AcmConfig cfg;
    cfg.schedule = ScheduleSpec::constant(5.0);
    pop.members[3].fc = 5;
    pop.members[4].fc = 4;
    pop.members[5].fc = 6;
    const auto [p, r] = run_step(pop, cfg, 7);
    CHECK(r.cauchy_trials == 1);
    CHECK(r.engine_trials == 9);
  }
}

TEST_CASE("operator options") {
  CHECK(parse_cauchy_mode("acm") == CauchyMode::acm);
  CHECK(parse_cauchy_mode("cm") == CauchyMode::cm);
  CHECK(parse_cauchy_mode("none") == CauchyMode::none);
  CHECK_THROWS_AS(parse_cauchy_mode("gauss"), ConfigError);
  CauchyOptions o;
  o.mode = CauchyMode::cm;
  CHECK(o.threshold_at(3, 10) == 5.0);
  o.mode = CauchyMode::acm;
  CHECK(std::abs(o.threshold_at(0, 10) - 99.7651) < 1e-3);
  CHECK(o.threshold_at(20, 10) == o.threshold_at(10, 10));
  AcmConfig bad;
  bad.gamma = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
