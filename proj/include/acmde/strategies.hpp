#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include "acmde/core.hpp"

namespace acmde {

enum class StrategyKind {
  rand1,
  best1,
  current_to_best1,
  current_to_rand1,
  rand2,
  current_to_best2,
  current_to_pbest1,
  best2,
};

enum class CrossoverKind { binomial, exponential, none };

std::string_view to_string(StrategyKind kind);
std::string_view to_string(CrossoverKind kind);
/// Accepts "rand/1", "best/1", "current-to-best/1", "current-to-rand/1",
/// "rand/2", "current-to-best/2", "current-to-pbest/1", "best/2".
StrategyKind parse_strategy(std::string_view name);
CrossoverKind parse_crossover(std::string_view name);

/// Number of difference-vector donors the strategy draws besides the target.
std::size_t donor_count(StrategyKind kind);

struct StrategySpec {
  StrategyKind kind = StrategyKind::rand1;
  double f = 0.5;
  double cr = 0.5;
  CrossoverKind crossover = CrossoverKind::binomial;
  /// Fraction of the population forming the p-best pool.
  double p = 0.1;
  /// Draw the last current-to-pbest donor from population plus archive.
  bool use_archive = false;

  /// current-to-rand/1 forces crossover none.
  void validate() const;
};

/// Size of the p-best pool: ceil(p * n), at least 1, at most n.
std::size_t pbest_pool_size(double p, std::size_t n);

/// Vectors feeding one mutation. Unused slots stay empty.
struct MutationInputs {
  std::span<const double> target;
  std::span<const double> best;
  std::span<const double> pbest;
  std::array<std::span<const double>, 5> donors{};
  double f = 0.5;
  /// Uniform coefficient of current-to-rand/1.
  double k = 0.0;
};

/// Pure mutation arithmetic, one formula per strategy. The dimension comes
/// from the target, or from the first donor when no target is given.
Vector combine(StrategyKind kind, const MutationInputs& in);

/// Donors for one target: distinct global indices (all != i), the
/// current-to-rand K coefficient and the p-best pick.
struct DonorDraw {
  std::array<std::size_t, 5> r{};
  std::size_t count = 0;
  double k = 0.0;
  std::size_t pbest = 0;
  /// Set when the last current-to-pbest donor came from the archive.
  const Vector* archive_donor = nullptr;
};

/// Draw order: p-best pick (current-to-pbest only), donors by rejection on
/// index(view.size()), then K (current-to-rand only).
DonorDraw draw_donors(const GenerationView& view, std::size_t i, const StrategySpec& spec,
                      RandomSource& rng, const Archive* archive = nullptr);

Vector mutate(const GenerationView& view, std::size_t i, const StrategySpec& spec,
              RandomSource& rng, const Archive* archive = nullptr);

/// trial[j] = mutant[j] iff u[j] < cr or j == j_rand (0-based).
Vector crossover_binomial(std::span<const double> target, std::span<const double> mutant,
                          double cr, std::size_t j_rand, std::span<const double> u);
/// Draws j_rand, then one uniform per component.
Vector crossover_binomial(std::span<const double> target, std::span<const double> mutant,
                          double cr, RandomSource& rng);

/// Circular run of mutant components, 0-based start.
struct ExponentialSegment {
  std::size_t start = 0;
  std::size_t length = 1;
};

ExponentialSegment draw_exponential_segment(std::size_t dimension, double cr, RandomSource& rng);
Vector crossover_exponential(std::span<const double> target, std::span<const double> mutant,
                             ExponentialSegment segment);
Vector crossover_exponential(std::span<const double> target, std::span<const double> mutant,
                             double cr, RandomSource& rng);

/// Mutation, crossover and bound repair against the target.
Vector make_trial(const GenerationView& view, std::size_t i, const StrategySpec& spec,
                  RandomSource& rng, const Archive* archive = nullptr);

}  // namespace acmde
