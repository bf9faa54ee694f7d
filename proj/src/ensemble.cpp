#include "acmde/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acmde/adaptive.hpp"
#include "acmde/error.hpp"

namespace acmde {

std::array<std::size_t, 4> partition_sizes(std::size_t np, double small_ratio) {
  if (!(small_ratio > 0.0 && small_ratio < 1.0 / 3.0 + 1e-12)) {
    throw ConfigError("ensemble: small subpopulation ratio must lie in (0, 1/3]");
  }
  const auto small =
      static_cast<std::size_t>(std::floor(small_ratio * static_cast<double>(np) + 1e-9));
  return {small, small, small, np - 3 * small};
}

EnsembleEngine::EnsembleEngine(std::string name, std::array<std::unique_ptr<Engine>, 3> constituents,
                               EnsembleOptions options)
    : name_(std::move(name)), constituents_(std::move(constituents)), options_(options) {
  if (options_.learning_period == 0) throw ConfigError("ensemble: learning period must be positive");
  partition_sizes(100, options_.small_ratio);  // validates the ratio
}

std::unique_ptr<EnsembleEngine> EnsembleEngine::mpede(EnsembleOptions options) {
  auto make = [](StrategyKind kind, bool archive) {
    JadeEngine::Options o;
    o.kind = kind;
    o.use_archive = archive;
    return std::make_unique<JadeEngine>(o);
  };
  std::array<std::unique_ptr<Engine>, 3> parts{make(StrategyKind::current_to_pbest1, true),
                                               make(StrategyKind::current_to_rand1, false),
                                               make(StrategyKind::rand1, false)};
  return std::make_unique<EnsembleEngine>("MPEDE", std::move(parts), options);
}

std::unique_ptr<EnsembleEngine> EnsembleEngine::edev(EnsembleOptions options) {
  std::array<std::unique_ptr<Engine>, 3> parts{std::make_unique<JadeEngine>(),
                                               std::make_unique<CodeEngine>(),
                                               std::make_unique<EpsdeEngine>()};
  return std::make_unique<EnsembleEngine>("EDEV", std::move(parts), options);
}

std::size_t EnsembleEngine::min_members() const {
  std::size_t need = 0;
  for (const auto& c : constituents_) need = std::max(need, c->min_members());
  return static_cast<std::size_t>(std::ceil(static_cast<double>(need) / options_.small_ratio - 1e-9));
}

void EnsembleEngine::reset(const Population& pop, RandomSource& rng) {
  sizes_ = partition_sizes(pop.size(), options_.small_ratio);
  for (std::size_t c = 0; c < 3; ++c) {
    if (sizes_[c] < constituents_[c]->min_members()) {
      throw ConfigError(name_ + ": subpopulation of " + std::to_string(sizes_[c]) +
                        " is too small for " + constituents_[c]->name());
    }
  }
  for (auto& c : constituents_) c->reset(pop, rng);
  reward_owner_ = rng.index(3);
  improvement_.fill(0.0);
  evaluations_.fill(0.0);
  group_of_.assign(pop.size(), 0);
  shuffle_membership(rng);
}

void EnsembleEngine::shuffle_membership(RandomSource& rng) {
  std::vector<std::size_t> order(group_of_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.index(k)]);
  std::size_t pos = 0;
  for (std::size_t grp = 0; grp < 4; ++grp) {
    for (std::size_t n = 0; n < sizes_[grp]; ++n) group_of_[order[pos++]] = grp;
  }
}

std::size_t EnsembleEngine::constituent_of(std::size_t i) const {
  const std::size_t grp = group_of_[i];
  return grp == 3 ? reward_owner_ : grp;
}

void EnsembleEngine::begin_generation(std::size_t g, RandomSource& rng) {
  for (auto& c : constituents_) c->begin_generation(g, rng);
}

std::vector<std::vector<std::size_t>> EnsembleEngine::groups(const Population& pop) {
  std::vector<std::vector<std::size_t>> out(4);
  for (std::size_t i = 0; i < pop.size(); ++i) out[group_of_[i]].push_back(i);
  return out;
}

std::optional<Proposal> EnsembleEngine::propose(const GenerationView& view, std::size_t i,
                                                RandomSource& rng, Evaluator& eval) {
  return constituents_[constituent_of(i)]->propose(view, i, rng, eval);
}

void EnsembleEngine::record(const Outcome& outcome, RandomSource& rng) {
  const std::size_t c = constituent_of(outcome.index);
  improvement_[c] += outcome.improvement();
  evaluations_[c] += static_cast<double>(outcome.evaluations);
  constituents_[c]->record(outcome, rng);
}

void EnsembleEngine::end_generation(std::size_t g, RandomSource& rng) {
  for (auto& c : constituents_) c->end_generation(g, rng);
  reassign_reward(g, rng);
}

bool EnsembleEngine::reassign_reward(std::size_t g, RandomSource& rng) {
  if (g == 0 || g % options_.learning_period != 0) return false;
  std::size_t winner = 0;
  double best_rate = -1.0;
  for (std::size_t c = 0; c < 3; ++c) {
    const double rate = evaluations_[c] > 0.0 ? improvement_[c] / evaluations_[c] : 0.0;
    if (rate > best_rate) {
      best_rate = rate;
      winner = c;
    }
  }
  reward_owner_ = winner;
  improvement_.fill(0.0);
  evaluations_.fill(0.0);
  shuffle_membership(rng);
  return true;
}

void EnsembleEngine::set_statistics(std::array<double, 3> improvement,
                                    std::array<double, 3> evaluations) {
  improvement_ = improvement;
  evaluations_ = evaluations;
}

double EnsembleEngine::evaluations_per_member() const {
  double total = 0.0;
  double members = 0.0;
  for (std::size_t grp = 0; grp < 4; ++grp) {
    const std::size_t c = grp == 3 ? reward_owner_ : grp;
    total += static_cast<double>(sizes_[grp]) * constituents_[c]->evaluations_per_member();
    members += static_cast<double>(sizes_[grp]);
  }
  return members > 0.0 ? total / members : 1.0;
}

}  // namespace acmde
