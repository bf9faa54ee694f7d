#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "acmde/random.hpp"

namespace acmde {

using Vector = std::vector<double>;

/// Box constraints, one [lower, upper] interval per dimension.
class Bounds {
 public:
  /// Throws ConfigError unless both vectors are non-empty, equally long and
  /// lower[j] < upper[j] everywhere.
  Bounds(Vector lower, Vector upper);
  static Bounds uniform(std::size_t dimension, double lower, double upper);

  std::size_t dimension() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  bool contains(std::span<const double> x) const;

 private:
  Vector lower_;
  Vector upper_;
};

struct Individual {
  Vector x;
  std::optional<double> fitness;
  /// Consecutive generations this member's trial lost selection.
  std::size_t fc = 0;

  bool evaluated() const { return fitness.has_value(); }
};

struct Population {
  std::vector<Individual> members;
  std::size_t g = 0;
  std::uint64_t nfe = 0;

  std::size_t size() const { return members.size(); }
  std::size_t dimension() const { return members.empty() ? 0 : members.front().x.size(); }
  /// Lowest-fitness member; ties go to the lowest index.
  std::size_t best_index() const;
  double best_fitness() const;
};

/// Termination limits. At least one must be set.
struct Budget {
  std::optional<std::size_t> g_max;
  std::optional<std::uint64_t> nfe_max;

  void validate() const;
  bool exhausted(std::size_t g, std::uint64_t nfe) const;
};

using ObjectiveFn = std::function<double(std::span<const double>)>;

/// Counts objective calls and refuses them once the limit is reached.
class Evaluator {
 public:
  using Observer = std::function<void(std::uint64_t nfe, double fitness)>;

  Evaluator(ObjectiveFn fn, std::uint64_t limit);

  /// nullopt when the budget is spent; the objective is not called then.
  std::optional<double> operator()(std::span<const double> x);

  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }
  std::uint64_t remaining() const { return limit_ - used_; }
  bool exhausted() const { return used_ >= limit_; }

  /// Called after every successful evaluation.
  void set_observer(Observer observer) { observer_ = std::move(observer); }

 private:
  ObjectiveFn fn_;
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
  Observer observer_;
};

/// Uniform initialization inside the box. Fitness is left unevaluated.
/// Draw order: member by member, one uniform() per component.
Population initialize(const Bounds& bounds, std::size_t np, RandomSource& rng);

/// Evaluates every unevaluated member. Returns false if the budget ran out
/// before all members were evaluated.
bool evaluate_population(Population& pop, Evaluator& eval);

struct Selection {
  Individual winner;
  bool success = false;
};

/// Greedy one-to-one selection. The trial wins ties.
Selection select(const Individual& target, const Individual& trial);

/// Components outside the box are moved halfway between the parent's value
/// and the violated bound. Requires the parent to be feasible.
Vector repair_bounds(std::span<const double> x, const Bounds& bounds,
                     std::span<const double> parent);

/// Bounded pool of discarded target vectors. New entries replace a random
/// slot once the pool is full.
class Archive {
 public:
  explicit Archive(std::size_t capacity = 0) : capacity_(capacity) {}

  void set_capacity(std::size_t capacity);
  void add(Vector x, RandomSource& rng);
  void clear() { items_.clear(); }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Vector& operator[](std::size_t k) const { return items_[k]; }

 private:
  std::size_t capacity_;
  std::vector<Vector> items_;
};

/// A (sub)population as seen by the operators during one generation: the
/// generation-start snapshot restricted to `members`, ranked by fitness.
struct GenerationView {
  const Population* pop = nullptr;
  const Bounds* bounds = nullptr;
  std::vector<std::size_t> members;
  /// Same indices as members, best first (stable on ties).
  std::vector<std::size_t> ranking;

  std::size_t size() const { return members.size(); }
  std::size_t best() const { return ranking.front(); }
  const Individual& at(std::size_t global) const { return pop->members[global]; }
};

GenerationView make_view(const Population& pop, const Bounds& bounds,
                         std::vector<std::size_t> members);
GenerationView make_full_view(const Population& pop, const Bounds& bounds);

}  // namespace acmde
