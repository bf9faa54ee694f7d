#pragma once

#include <array>
#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "acmde/engine.hpp"
#include "acmde/strategies.hpp"

namespace acmde {

// ---------------------------------------------------------------------------
// Statistics shared by the parameter controls

/// Median with the mean of the two middle values for even sizes.
double median(std::vector<double> values);
double arithmetic_mean(std::span<const double> values);
/// sum(v^2) / sum(v). Requires a non-empty set with positive sum.
double lehmer_mean(std::span<const double> values);
/// sum(w v^2) / sum(w v). Weights are used as given; an all-zero weight
/// vector falls back to equal weights.
double weighted_lehmer_mean(std::span<const double> values, std::span<const double> weights);
double weighted_mean(std::span<const double> values, std::span<const double> weights);

// ---------------------------------------------------------------------------
// SaDE

/// Strategy probabilities from windowed success/failure totals:
/// S_k = ns_k / (ns_k + nf_k) + eps, p_k = S_k / sum(S). A strategy with no
/// trials in the window contributes eps only.
std::vector<double> sade_probabilities(std::span<const double> ns, std::span<const double> nf,
                                       double eps = 0.001);

struct SadeState {
  /// rand/1/bin, current-to-best/1/bin, rand/2/bin, current-to-rand/1.
  std::vector<StrategySpec> strategies;
  std::vector<double> probabilities;
  std::vector<double> cr_median;
  std::size_t learning_period = 50;
  double eps = 0.001;

  struct GenerationMemory {
    std::vector<double> ns;
    std::vector<double> nf;
    std::vector<std::vector<double>> successful_cr;
  };
  /// At most learning_period generations, newest last.
  std::deque<GenerationMemory> window;

  static SadeState standard(std::size_t learning_period = 50);
  std::size_t size() const { return strategies.size(); }
};

/// Recomputes probabilities and CR medians from the window once g exceeds the
/// learning period; before that the probabilities stay uniform. An empty
/// window leaves probabilities uniform. Returns the probabilities.
const std::vector<double>& sade_update(SadeState& state, std::size_t g);

/// F ~ N(0.5, 0.3) redrawn while F <= 0; CR ~ N(cr_median[k], 0.1) clamped
/// to [0, 1]. Draw order: F draws, then the CR draw.
std::pair<double, double> sade_sample_params(const SadeState& state, std::size_t k,
                                             RandomSource& rng);

class SadeEngine final : public Engine {
 public:
  explicit SadeEngine(std::size_t learning_period = 50);

  std::string name() const override { return "SaDE"; }
  void reset(const Population& pop, RandomSource& rng) override;
  void begin_generation(std::size_t g, RandomSource& rng) override;
  std::optional<Proposal> propose(const GenerationView& view, std::size_t i, RandomSource& rng,
                                  Evaluator& eval) override;
  void record(const Outcome& outcome, RandomSource& rng) override;
  std::size_t min_members() const override { return 6; }

  const SadeState& state() const { return state_; }

 private:
  struct Choice {
    std::size_t k = 0;
    double cr = 0.0;
  };
  SadeState state_;
  std::vector<Choice> choice_;
};

// ---------------------------------------------------------------------------
// JADE / SHADE parameter control

/// F ~ Cauchy(mu_f, 0.1) redrawn while F <= 0 and capped at 1;
/// CR ~ N(mu_cr, 0.1) clamped to [0, 1]. Draw order: F draws, then CR.
std::pair<double, double> jade_sample_params(double mu_f, double mu_cr, RandomSource& rng);

/// mu' = (1 - c) mu + c * mean, with the Lehmer mean for F and the arithmetic
/// mean for CR. Empty success sets leave both unchanged.
std::pair<double, double> jade_update_means(double mu_f, double mu_cr,
                                            std::span<const double> s_f,
                                            std::span<const double> s_cr, double c);

/// Success sets gathered during one generation.
struct SuccessSets {
  std::vector<double> f;
  std::vector<double> cr;
  std::vector<double> improvement;

  void clear() {
    f.clear();
    cr.clear();
    improvement.clear();
  }
  bool empty() const { return f.empty(); }
};

struct ShadeMemory {
  std::vector<double> m_f;
  std::vector<double> m_cr;
  std::size_t cursor = 0;

  explicit ShadeMemory(std::size_t h = 100) : m_f(h, 0.5), m_cr(h, 0.5) {}
  std::size_t size() const { return m_f.size(); }
};

/// Writes the improvement-weighted Lehmer mean of S_F and weighted mean of
/// S_CR into the cursor slot, then advances the cursor. Weights are the
/// improvements normalized to sum 1. No-op for empty sets.
void shade_step_memory(ShadeMemory& memory, const SuccessSets& sets);

/// JADE-controlled DE. The strategy defaults to current-to-pbest/1/bin with
/// an archive; other strategies serve the multi-population constituents.
class JadeEngine final : public Engine {
 public:
  struct Options {
    StrategyKind kind = StrategyKind::current_to_pbest1;
    double c = 0.1;
    double p = 0.1;
    bool use_archive = true;
  };

  JadeEngine();
  explicit JadeEngine(Options options);

  std::string name() const override;
  void reset(const Population& pop, RandomSource& rng) override;
  void begin_generation(std::size_t g, RandomSource& rng) override;
  std::optional<Proposal> propose(const GenerationView& view, std::size_t i, RandomSource& rng,
                                  Evaluator& eval) override;
  void record(const Outcome& outcome, RandomSource& rng) override;
  void end_generation(std::size_t g, RandomSource& rng) override;
  std::size_t min_members() const override { return donor_count(options_.kind) + 1; }

  double mu_f() const { return mu_f_; }
  double mu_cr() const { return mu_cr_; }

 private:
  Options options_;
  double mu_f_ = 0.5;
  double mu_cr_ = 0.5;
  Archive archive_;
  std::vector<std::pair<double, double>> params_;
  SuccessSets success_;
};

class ShadeEngine final : public Engine {
 public:
  /// h == 0 sizes the memory to the population.
  explicit ShadeEngine(std::size_t h = 0, double p = 0.1);

  std::string name() const override { return "SHADE"; }
  void reset(const Population& pop, RandomSource& rng) override;
  void begin_generation(std::size_t g, RandomSource& rng) override;
  std::optional<Proposal> propose(const GenerationView& view, std::size_t i, RandomSource& rng,
                                  Evaluator& eval) override;
  void record(const Outcome& outcome, RandomSource& rng) override;
  void end_generation(std::size_t g, RandomSource& rng) override;
  std::size_t min_members() const override { return 4; }

  const ShadeMemory& memory() const { return memory_; }

 private:
  std::size_t h_;
  double p_;
  ShadeMemory memory_;
  Archive archive_;
  std::vector<std::pair<double, double>> params_;
  SuccessSets success_;
};

// ---------------------------------------------------------------------------
// EPSDE

struct EpsdeCombination {
  StrategyKind kind = StrategyKind::rand1;
  double f = 0.5;
  double cr = 0.5;

  bool operator==(const EpsdeCombination&) const = default;
  StrategySpec spec() const;
};

struct EpsdeState {
  /// best/2, rand/1, current-to-rand/1.
  std::array<StrategyKind, 3> strategies{StrategyKind::best2, StrategyKind::rand1,
                                         StrategyKind::current_to_rand1};
  /// 0.4 .. 0.9 step 0.1.
  std::array<double, 6> f_pool{0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  /// 0.1 .. 0.9 step 0.1.
  std::array<double, 9> cr_pool{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<EpsdeCombination> current;
  std::deque<EpsdeCombination> success_memory;
  std::size_t memory_capacity = 100;

  /// Uniform draw from the pools: strategy, then F, then CR.
  EpsdeCombination fresh(RandomSource& rng) const;
};

/// Combination member i carries into the next generation. Success keeps the
/// current one; failure picks, with equal probability, a fresh pool draw or a
/// uniformly chosen remembered winner (fresh draw when memory is empty).
EpsdeCombination epsde_assign(EpsdeState& state, std::size_t i, bool success, RandomSource& rng);

class EpsdeEngine final : public Engine {
 public:
  std::string name() const override { return "EPSDE"; }
  void reset(const Population& pop, RandomSource& rng) override;
  std::optional<Proposal> propose(const GenerationView& view, std::size_t i, RandomSource& rng,
                                  Evaluator& eval) override;
  void record(const Outcome& outcome, RandomSource& rng) override;
  std::size_t min_members() const override { return 5; }

  const EpsdeState& state() const { return state_; }

 private:
  EpsdeState state_;
};

// ---------------------------------------------------------------------------
// CoDE

struct CodeConfig {
  std::array<StrategySpec, 3> strategies{
      StrategySpec{StrategyKind::rand1, 1.0, 0.1, CrossoverKind::binomial},
      StrategySpec{StrategyKind::rand2, 1.0, 0.1, CrossoverKind::binomial},
      StrategySpec{StrategyKind::current_to_rand1, 1.0, 0.1, CrossoverKind::none},
  };
  /// (F, CR) pairs.
  std::array<std::pair<double, double>, 3> parameters{{{1.0, 0.1}, {1.0, 0.9}, {0.8, 0.2}}};
};

/// Three candidates, one per strategy, each with a uniformly drawn parameter
/// pair; returns the lowest-fitness one (first in strategy order on ties).
/// Stops early when the budget runs out and returns the best evaluated so
/// far, or nullopt if none was.
std::optional<Proposal> code_generate(const GenerationView& view, std::size_t i,
                                      const CodeConfig& cfg, Evaluator& eval, RandomSource& rng);

class CodeEngine final : public Engine {
 public:
  explicit CodeEngine(CodeConfig cfg = {}) : cfg_(cfg) {}

  std::string name() const override { return "CoDE"; }
  std::optional<Proposal> propose(const GenerationView& view, std::size_t i, RandomSource& rng,
                                  Evaluator& eval) override;
  double evaluations_per_member() const override { return 3.0; }
  std::size_t min_members() const override { return 6; }

 private:
  CodeConfig cfg_;
};

}  // namespace acmde
