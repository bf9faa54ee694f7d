#include "acmde/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acmde/error.hpp"

namespace acmde {

namespace {

struct StrategyName {
  StrategyKind kind;
  std::string_view name;
};

constexpr std::array<StrategyName, 8> kStrategyNames{{
    {StrategyKind::rand1, "rand/1"},
    {StrategyKind::best1, "best/1"},
    {StrategyKind::current_to_best1, "current-to-best/1"},
    {StrategyKind::current_to_rand1, "current-to-rand/1"},
    {StrategyKind::rand2, "rand/2"},
    {StrategyKind::current_to_best2, "current-to-best/2"},
    {StrategyKind::current_to_pbest1, "current-to-pbest/1"},
    {StrategyKind::best2, "best/2"},
}};

// Difference vectors drawn purely from the population (the archive donor of
// current-to-pbest is handled separately).
std::size_t population_donors(StrategyKind kind) {
  return kind == StrategyKind::current_to_pbest1 ? 1 : donor_count(kind);
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
  for (const auto& s : kStrategyNames) {
    if (s.kind == kind) return s.name;
  }
  return "?";
}

std::string_view to_string(CrossoverKind kind) {
  switch (kind) {
    case CrossoverKind::binomial: return "bin";
    case CrossoverKind::exponential: return "exp";
    case CrossoverKind::none: return "none";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  for (const auto& s : kStrategyNames) {
    if (s.name == name) return s.kind;
  }
  throw ConfigError("unknown mutation strategy '" + std::string(name) + "'");
}

CrossoverKind parse_crossover(std::string_view name) {
  if (name == "bin" || name == "binomial") return CrossoverKind::binomial;
  if (name == "exp" || name == "exponential") return CrossoverKind::exponential;
  if (name == "none") return CrossoverKind::none;
  throw ConfigError("unknown crossover '" + std::string(name) + "'");
}

std::size_t donor_count(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::rand1: return 3;
    case StrategyKind::best1: return 2;
    case StrategyKind::current_to_best1: return 2;
    case StrategyKind::current_to_rand1: return 3;
    case StrategyKind::rand2: return 5;
    case StrategyKind::current_to_best2: return 4;
    case StrategyKind::current_to_pbest1: return 2;
    case StrategyKind::best2: return 4;
  }
  return 0;
}

void StrategySpec::validate() const {
  if (!std::isfinite(f)) throw ConfigError("strategy: F must be finite");
  if (!(cr >= 0.0 && cr <= 1.0)) throw ConfigError("strategy: CR must lie in [0, 1]");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("strategy: p must lie in (0, 1]");
  if (kind == StrategyKind::current_to_rand1 && crossover != CrossoverKind::none) {
    throw ConfigError("strategy: current-to-rand/1 takes no crossover");
  }
}

std::size_t pbest_pool_size(double p, std::size_t n) {
  // The epsilon keeps products such as 0.3 * 10 from rounding up to 4.
  auto size = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) - 1e-9));
  return std::clamp<std::size_t>(size, 1, n);
}

Vector combine(StrategyKind kind, const MutationInputs& in) {
  const std::size_t d = in.target.empty() ? in.donors[0].size() : in.target.size();
  const auto& r = in.donors;
  const double f = in.f;
  Vector v(d);
  for (std::size_t j = 0; j < d; ++j) {
    switch (kind) {
      case StrategyKind::rand1:
        v[j] = r[0][j] + f * (r[1][j] - r[2][j]);
        break;
      case StrategyKind::best1:
        v[j] = in.best[j] + f * (r[0][j] - r[1][j]);
        break;
      case StrategyKind::current_to_best1:
        v[j] = in.target[j] + f * (in.best[j] - in.target[j]) + f * (r[0][j] - r[1][j]);
        break;
      case StrategyKind::current_to_rand1:
        v[j] = in.target[j] + in.k * (r[0][j] - in.target[j]) + f * (r[1][j] - r[2][j]);
        break;
      case StrategyKind::rand2:
        v[j] = r[0][j] + f * (r[1][j] - r[2][j]) + f * (r[3][j] - r[4][j]);
        break;
      case StrategyKind::current_to_best2:
        v[j] = in.target[j] + f * (in.best[j] - in.target[j]) + f * (r[0][j] - r[1][j]) +
               f * (r[2][j] - r[3][j]);
        break;
      case StrategyKind::current_to_pbest1:
        v[j] = in.target[j] + f * (in.pbest[j] - in.target[j]) + f * (r[0][j] - r[1][j]);
        break;
      case StrategyKind::best2:
        v[j] = in.best[j] + f * (r[0][j] - r[1][j]) + f * (r[2][j] - r[3][j]);
        break;
    }
  }
  return v;
}

DonorDraw draw_donors(const GenerationView& view, std::size_t i, const StrategySpec& spec,
                      RandomSource& rng, const Archive* archive) {
  const std::size_t n = view.size();
  const std::size_t from_pop = population_donors(spec.kind);
  if (n < donor_count(spec.kind) + 1) {
    throw ConfigError("mutate: strategy " + std::string(to_string(spec.kind)) + " needs at least " +
                      std::to_string(donor_count(spec.kind) + 1) + " members, have " +
                      std::to_string(n));
  }

  DonorDraw draw;
  if (spec.kind == StrategyKind::current_to_pbest1) {
    draw.pbest = view.ranking[rng.index(pbest_pool_size(spec.p, n))];
  }

  auto taken = [&](std::size_t candidate) {
    if (candidate == i) return true;
    for (std::size_t k = 0; k < draw.count; ++k) {
      if (draw.r[k] == candidate) return true;
    }
    return false;
  };

  while (draw.count < from_pop) {
    const std::size_t c = view.members[rng.index(n)];
    if (!taken(c)) draw.r[draw.count++] = c;
  }

  if (spec.kind == StrategyKind::current_to_pbest1) {
    const std::size_t extra = (spec.use_archive && archive) ? archive->size() : 0;
    for (;;) {
      const std::size_t pick = rng.index(n + extra);
      if (pick >= n) {
        draw.archive_donor = &(*archive)[pick - n];
        draw.r[draw.count++] = pick;  // not a population index; kept for tracing
        break;
      }
      const std::size_t c = view.members[pick];
      if (!taken(c)) {
        draw.r[draw.count++] = c;
        break;
      }
    }
  }

  if (spec.kind == StrategyKind::current_to_rand1) draw.k = rng.uniform();
  return draw;
}

Vector mutate(const GenerationView& view, std::size_t i, const StrategySpec& spec,
              RandomSource& rng, const Archive* archive) {
  const DonorDraw draw = draw_donors(view, i, spec, rng, archive);
  MutationInputs in;
  in.target = view.at(i).x;
  in.best = view.at(view.best()).x;
  if (spec.kind == StrategyKind::current_to_pbest1) in.pbest = view.at(draw.pbest).x;
  for (std::size_t k = 0; k < draw.count; ++k) {
    const bool from_archive =
        draw.archive_donor && k + 1 == draw.count && spec.kind == StrategyKind::current_to_pbest1;
    in.donors[k] = from_archive ? std::span<const double>(*draw.archive_donor)
                                : std::span<const double>(view.at(draw.r[k]).x);
  }
  in.f = spec.f;
  in.k = draw.k;
  return combine(spec.kind, in);
}

Vector crossover_binomial(std::span<const double> target, std::span<const double> mutant,
                          double cr, std::size_t j_rand, std::span<const double> u) {
  Vector trial(target.begin(), target.end());
  for (std::size_t j = 0; j < trial.size(); ++j) {
    if (u[j] < cr || j == j_rand) trial[j] = mutant[j];
  }
  return trial;
}

Vector crossover_binomial(std::span<const double> target, std::span<const double> mutant,
                          double cr, RandomSource& rng) {
  const std::size_t d = target.size();
  const std::size_t j_rand = rng.index(d);
  Vector trial(target.begin(), target.end());
  for (std::size_t j = 0; j < d; ++j) {
    if (rng.uniform() < cr || j == j_rand) trial[j] = mutant[j];
  }
  return trial;
}

ExponentialSegment draw_exponential_segment(std::size_t dimension, double cr, RandomSource& rng) {
  ExponentialSegment seg;
  seg.start = rng.index(dimension);
  seg.length = 0;
  do {
    ++seg.length;
  } while (seg.length < dimension && rng.uniform() < cr);
  return seg;
}

Vector crossover_exponential(std::span<const double> target, std::span<const double> mutant,
                             ExponentialSegment segment) {
  Vector trial(target.begin(), target.end());
  const std::size_t d = trial.size();
  for (std::size_t k = 0; k < segment.length; ++k) {
    const std::size_t j = (segment.start + k) % d;
    trial[j] = mutant[j];
  }
  return trial;
}

Vector crossover_exponential(std::span<const double> target, std::span<const double> mutant,
                             double cr, RandomSource& rng) {
  return crossover_exponential(target, mutant, draw_exponential_segment(target.size(), cr, rng));
}

Vector make_trial(const GenerationView& view, std::size_t i, const StrategySpec& spec,
                  RandomSource& rng, const Archive* archive) {
  const Vector v = mutate(view, i, spec, rng, archive);
  const auto& target = view.at(i).x;
  Vector trial;
  switch (spec.crossover) {
    case CrossoverKind::binomial: trial = crossover_binomial(target, v, spec.cr, rng); break;
    case CrossoverKind::exponential: trial = crossover_exponential(target, v, spec.cr, rng); break;
    case CrossoverKind::none: trial = v; break;
  }
  return repair_bounds(trial, *view.bounds, target);
}

}  // namespace acmde
