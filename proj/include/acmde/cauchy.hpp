#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include "acmde/core.hpp"

namespace acmde {

struct CauchyParams {
  double x0 = 0.0;
  double gamma = 1.0;

  /// Throws ConfigError unless gamma > 0.
  void validate() const;
};

double cauchy_pdf(double x, const CauchyParams& params);
double cauchy_cdf(double x, const CauchyParams& params);
/// Inverse CDF, u in (0, 1).
double cauchy_quantile(double u, const CauchyParams& params);
/// Inverse-transform draw using one uniform_open().
double cauchy_sample(const CauchyParams& params, RandomSource& rng);

// ---------------------------------------------------------------------------
// Failure-threshold schedules

enum class ScheduleFamily { sftd, sfti, lftd, lfti, constant };

std::string_view to_string(ScheduleFamily family);
/// "SFTD", "SFTI", "LFTD", "LFTI" or "constant" (case-insensitive).
ScheduleFamily parse_schedule_family(std::string_view name);

struct ScheduleSpec {
  ScheduleFamily family = ScheduleFamily::sftd;
  double ft_init = 100.0;
  double ft_fin = 5.0;
  double lb = -6.0;
  double ub = 6.0;

  static ScheduleSpec constant(double ft) { return {ScheduleFamily::constant, ft, ft, -6.0, 6.0}; }

  /// Thresholds must be >= 1; decreasing families need ft_fin <= ft_init,
  /// increasing families the reverse.
  void validate() const;
};

/// Logistic ramp 1 / (1 + exp(-(lb + x (ub - lb)))) for x in [0, 1].
double schedule_sigmoid(double x, double lb, double ub);

/// FT_g for generation g of g_max. Throws std::invalid_argument when g > g_max
/// or g_max == 0.
double threshold(const ScheduleSpec& schedule, std::size_t g, std::size_t g_max);

/// Integer threshold used by the firing test: round(ft_g), at least 1.
std::size_t integer_threshold(double ft_g);

/// True when a member with `fc` consecutive failures takes the Cauchy branch:
/// fc >= T and fc mod T == 0 with T = integer_threshold(ft_g).
bool should_fire(std::size_t fc, double ft_g);

// ---------------------------------------------------------------------------
// Cauchy trial generation

struct AcmConfig {
  ScheduleSpec schedule;
  /// Fraction of the population forming the p-best pool.
  double p = 0.1;
  double gamma = 0.1;
  std::array<double, 2> cr_choices{0.1, 0.9};

  void validate() const;
};

/// Per-component Cauchy recombination around `center`. Component j takes a
/// Cauchy(center[j], gamma) value when u[j] passes the rate test or j ==
/// j_rand; the test is u < rate, or u <= rate when `inclusive`. The Cauchy
/// value for j is the quantile at cauchy_u[j]. No bound repair.
Vector cauchy_recombine(std::span<const double> target, std::span<const double> center,
                        double rate, bool inclusive, double gamma, std::size_t j_rand,
                        std::span<const double> u, std::span<const double> cauchy_u);

/// Cauchy mutation around the best member with mixing rate 0.5 (strict test).
/// Draw order: j_rand, then per component one uniform() followed by one
/// uniform_open() when the component fires. Result is bound-repaired.
Vector cm_trial(const Individual& target, const Individual& best, const Bounds& bounds,
                RandomSource& rng, double gamma = 0.1);

/// Advanced Cauchy mutation: center drawn from the top ceil(p * n) members of
/// `view`, mixing rate drawn from cfg.cr_choices, inclusive test.
/// Draw order: p-best pick, rate pick, j_rand, then as cm_trial.
Vector acm_trial(const Individual& target, const GenerationView& view, const AcmConfig& cfg,
                 RandomSource& rng);

// ---------------------------------------------------------------------------
// Operator switch

enum class CauchyMode { none, cm, acm };

std::string_view to_string(CauchyMode mode);
CauchyMode parse_cauchy_mode(std::string_view name);

/// Which Cauchy operator (if any) wraps a base engine, and its threshold.
struct CauchyOptions {
  CauchyMode mode = CauchyMode::none;
  /// Fixed threshold of the best-centered operator.
  double cm_threshold = 5.0;
  double cm_gamma = 0.1;
  AcmConfig acm;

  void validate() const;
  /// Threshold in force at generation g of g_max (g clamped to g_max).
  double threshold_at(std::size_t g, std::size_t g_max) const;
};

}  // namespace acmde
