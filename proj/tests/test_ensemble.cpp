#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "acmde/bench.hpp"
#include "acmde/ensemble.hpp"
#include "acmde/error.hpp"
#include "acmde/optimizer.hpp"

using namespace acmde;

namespace {

Population evaluated_population(std::size_t np, std::size_t d, std::uint64_t seed) {
  Mt64Source rng(seed);
  Population pop = initialize(Bounds::uniform(d, -5.0, 5.0), np, rng);
  for (auto& m : pop.members) m.fitness = sphere(m.x);
  return pop;
}

void check_partition(EnsembleEngine& e, const Population& pop) {
  const auto groups = e.groups(pop);
  REQUIRE(groups.size() == 4);
  std::vector<int> hits(pop.size(), 0);
  for (std::size_t g = 0; g < 4; ++g) {
    CHECK(groups[g].size() == e.sizes()[g]);
    for (std::size_t i : groups[g]) {
      ++hits[i];
      CHECK(e.group_of(i) == g);
    }
  }
  for (int h : hits) CHECK(h == 1);
}

}  // namespace

TEST_CASE("partition arithmetic") {
  CHECK(partition_sizes(40, 0.2) == std::array<std::size_t, 4>{8, 8, 8, 16});
  CHECK(partition_sizes(100, 0.2) == std::array<std::size_t, 4>{20, 20, 20, 40});
  CHECK(partition_sizes(100, 0.1) == std::array<std::size_t, 4>{10, 10, 10, 70});
  CHECK_THROWS_AS(partition_sizes(40, 0.5), ConfigError);
  CHECK_THROWS_AS(partition_sizes(40, 0.0), ConfigError);
}

TEST_CASE("counters start at zero") {
  auto e = EnsembleEngine::mpede();
  const Population pop = evaluated_population(40, 4, 1);
  Mt64Source rng(1);
  e->reset(pop, rng);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(e->improvements()[c] == 0.0);
    CHECK(e->evaluations()[c] == 0.0);
  }
  CHECK(e->reward_owner() < 3);
  check_partition(*e, pop);
}

TEST_CASE("reward goes to the best improvement rate") {
  auto e = EnsembleEngine::mpede();
  const Population pop = evaluated_population(40, 4, 2);
  Mt64Source rng(2);
  e->reset(pop, rng);

  SUBCASE("argmax") {
    e->set_statistics({10, 5, 1}, {4, 4, 4});
    CHECK(e->reassign_reward(20, rng));
    CHECK(e->reward_owner() == 0);
    e->set_statistics({1, 5, 10}, {4, 4, 4});
    CHECK(e->reassign_reward(40, rng));
    CHECK(e->reward_owner() == 2);
  }
  SUBCASE("rate, not total") {
    e->set_statistics({10, 6, 0}, {10, 3, 1});
    CHECK(e->reassign_reward(20, rng));
    CHECK(e->reward_owner() == 1);
  }
  SUBCASE("tie goes to the lowest index") {
    e->set_statistics({0, 3, 3}, {1, 1, 1});
    CHECK(e->reassign_reward(20, rng));
    CHECK(e->reward_owner() == 1);
  }
  SUBCASE("counters reset after reassignment") {
    e->set_statistics({1, 2, 3}, {1, 1, 1});
    e->reassign_reward(20, rng);
    CHECK(e->improvements() == std::array<double, 3>{0, 0, 0});
    CHECK(e->evaluations() == std::array<double, 3>{0, 0, 0});
  }
  SUBCASE("no reassignment off the boundary") {
    const std::size_t owner = e->reward_owner();
    e->set_statistics({1, 2, 3}, {1, 1, 1});
    CHECK_FALSE(e->reassign_reward(0, rng));
    CHECK_FALSE(e->reassign_reward(7, rng));
    CHECK_FALSE(e->reassign_reward(19, rng));
    CHECK(e->reward_owner() == owner);
    CHECK(e->improvements()[2] == 3.0);
  }
}

TEST_CASE("partition survives reassignment while running") {
  for (bool edev : {false, true}) {
    auto e = edev ? EnsembleEngine::edev(EnsembleOptions{0.1, 5})
                  : EnsembleEngine::mpede(EnsembleOptions{0.2, 5});
    const Bounds b = Bounds::uniform(5, -5.0, 5.0);
    Population pop = evaluated_population(100, 5, 3);
    Mt64Source rng(3);
    Evaluator eval([](std::span<const double> x) { return rastrigin(x); }, 1000000);
    e->reset(pop, rng);
    const auto sizes = e->sizes();
    double best = pop.best_fitness();
    for (std::size_t g = 0; g < 23; ++g) {
      step(pop, b, *e, CauchyOptions{}, eval, rng, 23);
      CHECK(e->sizes() == sizes);
      check_partition(*e, pop);
      CHECK(pop.best_fitness() <= best);
      best = pop.best_fitness();
    }
  }
}

TEST_CASE("subpopulations too small for a constituent are rejected") {
  auto e = EnsembleEngine::mpede();
  const Population pop = evaluated_population(10, 3, 4);  // 2 members per small group
  Mt64Source rng(4);
  CHECK_THROWS_AS(e->reset(pop, rng), ConfigError);
}
