#include "acmde/core.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "acmde/error.hpp"

namespace acmde {

Bounds::Bounds(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw ConfigError("bounds: dimension must be positive");
  if (lower_.size() != upper_.size()) throw ConfigError("bounds: lower/upper length mismatch");
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!(lower_[j] < upper_[j])) {
      throw ConfigError("bounds: degenerate interval at dimension " + std::to_string(j));
    }
  }
}

Bounds Bounds::uniform(std::size_t dimension, double lower, double upper) {
  return Bounds(Vector(dimension, lower), Vector(dimension, upper));
}

bool Bounds::contains(std::span<const double> x) const {
  if (x.size() != dimension()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < lower_[j] || x[j] > upper_[j]) return false;
  }
  return true;
}

std::size_t Population::best_index() const {
  if (members.empty()) throw ContractError("best_index: empty population");
  std::size_t best = 0;
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (!members[i].evaluated()) throw ContractError("best_index: unevaluated member");
    if (*members[i].fitness < *members[best].fitness) best = i;
  }
  if (!members[0].evaluated()) throw ContractError("best_index: unevaluated member");
  return best;
}

double Population::best_fitness() const { return *members[best_index()].fitness; }

void Budget::validate() const {
  if (!g_max && !nfe_max) throw ConfigError("budget: set g_max or nfe_max");
  if (g_max && *g_max == 0) throw ConfigError("budget: g_max must be positive");
  if (nfe_max && *nfe_max == 0) throw ConfigError("budget: nfe_max must be positive");
}

bool Budget::exhausted(std::size_t g, std::uint64_t nfe) const {
  return (g_max && g >= *g_max) || (nfe_max && nfe >= *nfe_max);
}

Evaluator::Evaluator(ObjectiveFn fn, std::uint64_t limit) : fn_(std::move(fn)), limit_(limit) {}

std::optional<double> Evaluator::operator()(std::span<const double> x) {
  if (exhausted()) return std::nullopt;
  const double f = fn_(x);
  ++used_;
  if (observer_) observer_(used_, f);
  return f;
}

Population initialize(const Bounds& bounds, std::size_t np, RandomSource& rng) {
  if (np < 4) throw ConfigError("initialize: population size must be at least 4");
  const std::size_t d = bounds.dimension();
  Population pop;
  pop.members.resize(np);
  for (auto& ind : pop.members) {
    ind.x.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      const double u = rng.uniform();
      ind.x[j] = bounds.lower()[j] + u * (bounds.upper()[j] - bounds.lower()[j]);
    }
  }
  return pop;
}

bool evaluate_population(Population& pop, Evaluator& eval) {
  for (auto& ind : pop.members) {
    if (ind.evaluated()) continue;
    auto f = eval(ind.x);
    if (!f) return false;
    ind.fitness = *f;
  }
  pop.nfe = eval.used();
  return true;
}

Selection select(const Individual& target, const Individual& trial) {
  if (!target.evaluated() || !trial.evaluated()) {
    throw ContractError("select: both individuals must be evaluated");
  }
  if (*trial.fitness <= *target.fitness) {
    Individual w = trial;
    w.fc = 0;
    return {std::move(w), true};
  }
  Individual w = target;
  w.fc = target.fc + 1;
  return {std::move(w), false};
}

Vector repair_bounds(std::span<const double> x, const Bounds& bounds,
                     std::span<const double> parent) {
  Vector out(x.begin(), x.end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (out[j] < bounds.lower()[j]) {
      out[j] = (bounds.lower()[j] + parent[j]) / 2.0;
    } else if (out[j] > bounds.upper()[j]) {
      out[j] = (bounds.upper()[j] + parent[j]) / 2.0;
    }
  }
  return out;
}

void Archive::set_capacity(std::size_t capacity) {
  capacity_ = capacity;
  if (items_.size() > capacity_) items_.resize(capacity_);
}

void Archive::add(Vector x, RandomSource& rng) {
  if (capacity_ == 0) return;
  if (items_.size() < capacity_) {
    items_.push_back(std::move(x));
  } else {
    items_[rng.index(items_.size())] = std::move(x);
  }
}

GenerationView make_view(const Population& pop, const Bounds& bounds,
                         std::vector<std::size_t> members) {
  GenerationView view;
  view.pop = &pop;
  view.bounds = &bounds;
  view.members = std::move(members);
  view.ranking = view.members;
  for (auto i : view.ranking) {
    if (!pop.members[i].evaluated()) throw ContractError("make_view: unevaluated member");
  }
  std::stable_sort(view.ranking.begin(), view.ranking.end(), [&](std::size_t a, std::size_t b) {
    return *pop.members[a].fitness < *pop.members[b].fitness;
  });
  return view;
}

GenerationView make_full_view(const Population& pop, const Bounds& bounds) {
  std::vector<std::size_t> all(pop.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return make_view(pop, bounds, std::move(all));
}

}  // namespace acmde
