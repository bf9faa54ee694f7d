#include "acmde/cauchy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "acmde/error.hpp"
#include "acmde/strategies.hpp"

namespace acmde {

void CauchyParams::validate() const {
  if (!(gamma > 0.0)) throw ConfigError("cauchy: scale must be positive");
}

double cauchy_pdf(double x, const CauchyParams& params) {
  params.validate();
  const double dx = x - params.x0;
  return params.gamma / (std::numbers::pi * (dx * dx + params.gamma * params.gamma));
}

double cauchy_cdf(double x, const CauchyParams& params) {
  params.validate();
  return std::atan((x - params.x0) / params.gamma) / std::numbers::pi + 0.5;
}

double cauchy_quantile(double u, const CauchyParams& params) {
  return params.x0 + params.gamma * std::tan(std::numbers::pi * (u - 0.5));
}

double cauchy_sample(const CauchyParams& params, RandomSource& rng) {
  params.validate();
  return cauchy_quantile(rng.uniform_open(), params);
}

std::string_view to_string(ScheduleFamily family) {
  switch (family) {
    case ScheduleFamily::sftd: return "SFTD";
    case ScheduleFamily::sfti: return "SFTI";
    case ScheduleFamily::lftd: return "LFTD";
    case ScheduleFamily::lfti: return "LFTI";
    case ScheduleFamily::constant: return "constant";
  }
  return "?";
}

ScheduleFamily parse_schedule_family(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "SFTD") return ScheduleFamily::sftd;
  if (upper == "SFTI") return ScheduleFamily::sfti;
  if (upper == "LFTD") return ScheduleFamily::lftd;
  if (upper == "LFTI") return ScheduleFamily::lfti;
  if (upper == "CONSTANT") return ScheduleFamily::constant;
  throw ConfigError("unknown schedule family '" + std::string(name) + "'");
}

void ScheduleSpec::validate() const {
  if (!(ft_init >= 1.0)) throw ConfigError("schedule: ft_init must be >= 1");
  if (family == ScheduleFamily::constant) return;
  if (!(ft_fin >= 1.0)) throw ConfigError("schedule: ft_fin must be >= 1");
  const bool decreasing = family == ScheduleFamily::sftd || family == ScheduleFamily::lftd;
  if (decreasing && ft_fin > ft_init) {
    throw ConfigError("schedule: decreasing family needs ft_fin <= ft_init");
  }
  if (!decreasing && ft_fin < ft_init) {
    throw ConfigError("schedule: increasing family needs ft_fin >= ft_init");
  }
  if (!(ub > lb)) throw ConfigError("schedule: ub must exceed lb");
}

double schedule_sigmoid(double x, double lb, double ub) {
  return 1.0 / (1.0 + std::exp(-(lb + x * (ub - lb))));
}

double threshold(const ScheduleSpec& schedule, std::size_t g, std::size_t g_max) {
  if (g_max == 0) throw std::invalid_argument("threshold: g_max must be positive");
  if (g > g_max) throw std::invalid_argument("threshold: g exceeds g_max");
  const double x = static_cast<double>(g) / static_cast<double>(g_max);
  const double span = schedule.ft_fin - schedule.ft_init;
  switch (schedule.family) {
    case ScheduleFamily::sftd:
    case ScheduleFamily::sfti:
      return schedule.ft_init + schedule_sigmoid(x, schedule.lb, schedule.ub) * span;
    case ScheduleFamily::lftd:
    case ScheduleFamily::lfti:
      return schedule.ft_init + x * span;
    case ScheduleFamily::constant:
      return schedule.ft_init;
  }
  return schedule.ft_init;
}

std::size_t integer_threshold(double ft_g) {
  const double r = std::round(ft_g);
  return r < 1.0 ? 1 : static_cast<std::size_t>(r);
}

bool should_fire(std::size_t fc, double ft_g) {
  const std::size_t t = integer_threshold(ft_g);
  return fc >= t && fc % t == 0;
}

void AcmConfig::validate() const {
  schedule.validate();
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("acm: p must lie in (0, 1]");
  if (!(gamma > 0.0)) throw ConfigError("acm: gamma must be positive");
  for (double cr : cr_choices) {
    if (!(cr >= 0.0 && cr <= 1.0)) throw ConfigError("acm: crossover choices must lie in [0, 1]");
  }
}

Vector cauchy_recombine(std::span<const double> target, std::span<const double> center,
                        double rate, bool inclusive, double gamma, std::size_t j_rand,
                        std::span<const double> u, std::span<const double> cauchy_u) {
  Vector trial(target.begin(), target.end());
  for (std::size_t j = 0; j < trial.size(); ++j) {
    const bool pass = inclusive ? u[j] <= rate : u[j] < rate;
    if (pass || j == j_rand) trial[j] = cauchy_quantile(cauchy_u[j], {center[j], gamma});
  }
  return trial;
}

namespace {

Vector draw_cauchy_trial(const Individual& target, std::span<const double> center, double rate,
                         bool inclusive, double gamma, const Bounds& bounds, RandomSource& rng) {
  const std::size_t d = target.x.size();
  const std::size_t j_rand = rng.index(d);
  Vector trial = target.x;
  for (std::size_t j = 0; j < d; ++j) {
    const double u = rng.uniform();
    const bool pass = inclusive ? u <= rate : u < rate;
    if (pass || j == j_rand) trial[j] = cauchy_sample({center[j], gamma}, rng);
  }
  return repair_bounds(trial, bounds, target.x);
}

}  // namespace

Vector cm_trial(const Individual& target, const Individual& best, const Bounds& bounds,
                RandomSource& rng, double gamma) {
  return draw_cauchy_trial(target, best.x, 0.5, false, gamma, bounds, rng);
}

Vector acm_trial(const Individual& target, const GenerationView& view, const AcmConfig& cfg,
                 RandomSource& rng) {
  const std::size_t pool = pbest_pool_size(cfg.p, view.size());
  const auto& pbest = view.at(view.ranking[rng.index(pool)]);
  const double rate = cfg.cr_choices[rng.index(2)];
  return draw_cauchy_trial(target, pbest.x, rate, true, cfg.gamma, *view.bounds, rng);
}

std::string_view to_string(CauchyMode mode) {
  switch (mode) {
    case CauchyMode::none: return "none";
    case CauchyMode::cm: return "cm";
    case CauchyMode::acm: return "acm";
  }
  return "?";
}

CauchyMode parse_cauchy_mode(std::string_view name) {
  if (name == "none" || name == "original") return CauchyMode::none;
  if (name == "cm" || name == "CM") return CauchyMode::cm;
  if (name == "acm" || name == "ACM") return CauchyMode::acm;
  throw ConfigError("unknown cauchy mode '" + std::string(name) + "'");
}

void CauchyOptions::validate() const {
  if (mode == CauchyMode::cm) {
    if (!(cm_threshold >= 1.0)) throw ConfigError("cm: threshold must be >= 1");
    if (!(cm_gamma > 0.0)) throw ConfigError("cm: gamma must be positive");
  }
  if (mode == CauchyMode::acm) acm.validate();
}

double CauchyOptions::threshold_at(std::size_t g, std::size_t g_max) const {
  switch (mode) {
    case CauchyMode::none: return 0.0;
    case CauchyMode::cm: return cm_threshold;
    case CauchyMode::acm: return threshold(acm.schedule, std::min(g, g_max), g_max);
  }
  return 0.0;
}

}  // namespace acmde
