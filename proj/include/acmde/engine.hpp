#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acmde/core.hpp"

namespace acmde {

/// A trial vector with its fitness and the evaluations spent producing it.
struct Proposal {
  Vector x;
  double fitness = 0.0;
  std::uint64_t evaluations = 1;
};

/// Selection result reported back to the engine that proposed the trial.
struct Outcome {
  std::size_t index = 0;
  bool success = false;
  /// Target before selection (its vector goes to archives on success).
  const Individual* target = nullptr;
  double trial_fitness = 0.0;
  std::uint64_t evaluations = 1;

  double improvement() const {
    const double d = *target->fitness - trial_fitness;
    return d > 0.0 ? d : 0.0;
  }
};

/// A trial-generation scheme (classic DE, SaDE, SHADE, an ensemble...).
///
/// Per generation the driver calls begin_generation, asks groups() how the
/// population is split, calls propose for every member not taken over by a
/// Cauchy operator, commits selection and reports each outcome via record,
/// then calls end_generation. All proposals of a generation read the same
/// generation-start snapshot.
class Engine {
 public:
  virtual ~Engine() = default;

  virtual std::string name() const = 0;

  /// Called once after the initial population is evaluated.
  virtual void reset(const Population& pop, RandomSource& rng) {
    (void)pop;
    (void)rng;
  }

  virtual void begin_generation(std::size_t g, RandomSource& rng) {
    (void)g;
    (void)rng;
  }

  /// Member lists forming the subpopulations of this generation. The default
  /// is a single group holding everyone.
  virtual std::vector<std::vector<std::size_t>> groups(const Population& pop);

  /// Builds and evaluates a trial for member i of `view`. Returns nullopt when
  /// the budget ran out before any trial could be evaluated.
  virtual std::optional<Proposal> propose(const GenerationView& view, std::size_t i,
                                          RandomSource& rng, Evaluator& eval) = 0;

  virtual void record(const Outcome& outcome, RandomSource& rng) {
    (void)outcome;
    (void)rng;
  }

  virtual void end_generation(std::size_t g, RandomSource& rng) {
    (void)g;
    (void)rng;
  }

  /// Nominal objective calls per member per generation; sizes the generation
  /// horizon when only an evaluation budget is given.
  virtual double evaluations_per_member() const { return 1.0; }

  /// Smallest subpopulation the engine can operate on.
  virtual std::size_t min_members() const { return 4; }
};

/// Evaluates one trial vector and wraps it as a proposal.
std::optional<Proposal> evaluate_proposal(Vector x, Evaluator& eval);

}  // namespace acmde
