#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "acmde/cauchy.hpp"
#include "acmde/core.hpp"
#include "acmde/engine.hpp"
#include "acmde/strategies.hpp"

namespace acmde {

/// Fixed-strategy DE: one mutation strategy, one crossover, constant F/CR.
class ClassicEngine final : public Engine {
 public:
  explicit ClassicEngine(StrategySpec spec);

  std::string name() const override;
  void reset(const Population& pop, RandomSource& rng) override;
  std::optional<Proposal> propose(const GenerationView& view, std::size_t i, RandomSource& rng,
                                  Evaluator& eval) override;
  void record(const Outcome& outcome, RandomSource& rng) override;
  std::size_t min_members() const override { return donor_count(spec_.kind) + 1; }

  const StrategySpec& spec() const { return spec_; }

 private:
  StrategySpec spec_;
  Archive archive_;
};

struct StepReport {
  double threshold = 0.0;
  std::size_t cauchy_trials = 0;
  std::size_t engine_trials = 0;
  std::size_t successes = 0;
  /// Members left without a trial because the budget ran out.
  std::size_t skipped = 0;
};

/// Advances `pop` by one generation. The threshold is computed once from the
/// 1-based generation number pop.g + 1; members whose failure counter passes
/// should_fire take the Cauchy operator selected by `cauchy`, everyone else
/// the engine. Selection then runs in index order and pop.g is incremented.
StepReport step(Population& pop, const Bounds& bounds, Engine& engine,
                const CauchyOptions& cauchy, Evaluator& eval, RandomSource& rng,
                std::size_t g_max);

/// One generation of a fixed-strategy DE wrapped by the advanced Cauchy
/// mutation.
StepReport acm_de_step(Population& pop, const Bounds& bounds, const StrategySpec& base,
                       const AcmConfig& cfg, Evaluator& eval, RandomSource& rng,
                       std::size_t g_max);

struct TracePoint {
  std::uint64_t nfe = 0;
  double fev = 0.0;
};

struct RunSettings {
  std::size_t np = 100;
  Budget budget;
  CauchyOptions cauchy;
  /// Trace sampling period in evaluations; 0 means one population size.
  std::uint64_t trace_interval = 0;
  double f_star = 0.0;
};

struct RunResult {
  Vector best_x;
  double best_fitness = 0.0;
  double final_fev = 0.0;
  std::uint64_t nfe = 0;
  std::size_t generations = 0;
  std::size_t g_max = 0;
  std::vector<TracePoint> trace;
  std::size_t cauchy_trials = 0;
  /// Instrumented invariant checks; both must stay zero.
  std::size_t monotonicity_violations = 0;
  std::size_t budget_violations = 0;
};

/// Generation horizon used by the threshold schedule: budget.g_max when set,
/// else the number of generations the evaluation budget affords after
/// initialization at the engine's nominal cost.
std::size_t generation_horizon(const Budget& budget, std::size_t np, double evals_per_member);

/// Full run: initialize, evaluate, then step until the budget is exhausted.
RunResult optimize(const ObjectiveFn& objective, const Bounds& bounds, Engine& engine,
                   const RunSettings& settings, RandomSource& rng);

}  // namespace acmde
