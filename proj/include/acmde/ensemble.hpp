#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "acmde/engine.hpp"

namespace acmde {

struct EnsembleOptions {
  /// Fraction of the population in each of the three small subpopulations;
  /// the reward subpopulation takes the rest.
  double small_ratio = 0.2;
  std::size_t learning_period = 20;

  static EnsembleOptions mpede() { return {0.2, 20}; }
  static EnsembleOptions edev() { return {0.1, 50}; }
};

/// Subpopulation sizes (small, small, small, reward) for np members.
std::array<std::size_t, 4> partition_sizes(std::size_t np, double small_ratio);

/// Three constituent engines over three equal small subpopulations plus one
/// reward subpopulation stepped by the constituent with the best fitness
/// improvement per evaluation over the last learning period.
class EnsembleEngine final : public Engine {
 public:
  EnsembleEngine(std::string name, std::array<std::unique_ptr<Engine>, 3> constituents,
                 EnsembleOptions options);

  /// current-to-pbest/1, current-to-rand/1 and rand/1, each JADE-controlled.
  static std::unique_ptr<EnsembleEngine> mpede(EnsembleOptions options = EnsembleOptions::mpede());
  /// JADE, CoDE and EPSDE.
  static std::unique_ptr<EnsembleEngine> edev(EnsembleOptions options = EnsembleOptions::edev());

  std::string name() const override { return name_; }
  void reset(const Population& pop, RandomSource& rng) override;
  void begin_generation(std::size_t g, RandomSource& rng) override;
  std::vector<std::vector<std::size_t>> groups(const Population& pop) override;
  std::optional<Proposal> propose(const GenerationView& view, std::size_t i, RandomSource& rng,
                                  Evaluator& eval) override;
  void record(const Outcome& outcome, RandomSource& rng) override;
  void end_generation(std::size_t g, RandomSource& rng) override;
  double evaluations_per_member() const override;
  std::size_t min_members() const override;

  /// Binds the reward subpopulation to the constituent with the highest
  /// improvement per evaluation (lowest index on ties), clears the counters
  /// and reshuffles membership. Runs only when g > 0 and g % LP == 0;
  /// returns whether it did.
  bool reassign_reward(std::size_t g, RandomSource& rng);

  std::size_t reward_owner() const { return reward_owner_; }
  /// Subpopulation of member i: 0..2 small, 3 reward.
  std::size_t group_of(std::size_t i) const { return group_of_[i]; }
  const std::array<std::size_t, 4>& sizes() const { return sizes_; }
  const std::array<double, 3>& improvements() const { return improvement_; }
  const std::array<double, 3>& evaluations() const { return evaluations_; }
  /// Test hook: overwrite the accumulated statistics.
  void set_statistics(std::array<double, 3> improvement, std::array<double, 3> evaluations);

 private:
  std::size_t constituent_of(std::size_t i) const;
  void shuffle_membership(RandomSource& rng);

  std::string name_;
  std::array<std::unique_ptr<Engine>, 3> constituents_;
  EnsembleOptions options_;
  std::array<std::size_t, 4> sizes_{};
  std::vector<std::size_t> group_of_;
  std::size_t reward_owner_ = 0;
  std::array<double, 3> improvement_{};
  std::array<double, 3> evaluations_{};
};

}  // namespace acmde
