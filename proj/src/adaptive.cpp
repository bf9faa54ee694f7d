#include "acmde/adaptive.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "acmde/cauchy.hpp"
#include "acmde/core.hpp"

namespace acmde {

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double arithmetic_mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean: empty set");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double lehmer_mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("lehmer_mean: empty set");
  double num = 0.0;
  double den = 0.0;
  for (double v : values) {
    num += v * v;
    den += v;
  }
  return num / den;
}

namespace {

std::vector<double> effective_weights(std::span<const double> values,
                                      std::span<const double> weights) {
  if (values.empty()) throw std::invalid_argument("weighted mean: empty set");
  if (values.size() != weights.size()) throw std::invalid_argument("weighted mean: size mismatch");
  std::vector<double> w(weights.begin(), weights.end());
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) std::fill(w.begin(), w.end(), 1.0);
  return w;
}

}  // namespace

double weighted_lehmer_mean(std::span<const double> values, std::span<const double> weights) {
  const auto w = effective_weights(values, weights);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    num += w[k] * values[k] * values[k];
    den += w[k] * values[k];
  }
  return num / den;
}

double weighted_mean(std::span<const double> values, std::span<const double> weights) {
  const auto w = effective_weights(values, weights);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    num += w[k] * values[k];
    den += w[k];
  }
  return num / den;
}

// ---------------------------------------------------------------------------
// SaDE

std::vector<double> sade_probabilities(std::span<const double> ns, std::span<const double> nf,
                                       double eps) {
  if (ns.size() != nf.size() || ns.empty()) {
    throw std::invalid_argument("sade_probabilities: bad memory sizes");
  }
  std::vector<double> s(ns.size());
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const double trials = ns[k] + nf[k];
    s[k] = (trials > 0.0 ? ns[k] / trials : 0.0) + eps;
  }
  const double total = std::accumulate(s.begin(), s.end(), 0.0);
  for (double& v : s) v /= total;
  return s;
}

SadeState SadeState::standard(std::size_t learning_period) {
  SadeState st;
  st.strategies = {
      StrategySpec{StrategyKind::rand1, 0.5, 0.5, CrossoverKind::binomial},
      StrategySpec{StrategyKind::current_to_best1, 0.5, 0.5, CrossoverKind::binomial},
      StrategySpec{StrategyKind::rand2, 0.5, 0.5, CrossoverKind::binomial},
      StrategySpec{StrategyKind::current_to_rand1, 0.5, 0.5, CrossoverKind::none},
  };
  st.probabilities.assign(st.size(), 1.0 / static_cast<double>(st.size()));
  st.cr_median.assign(st.size(), 0.5);
  st.learning_period = learning_period;
  return st;
}

const std::vector<double>& sade_update(SadeState& state, std::size_t g) {
  const std::size_t k_count = state.size();
  if (g <= state.learning_period || state.window.empty()) return state.probabilities;

  std::vector<double> ns(k_count, 0.0);
  std::vector<double> nf(k_count, 0.0);
  std::vector<std::vector<double>> crs(k_count);
  for (const auto& gen : state.window) {
    for (std::size_t k = 0; k < k_count; ++k) {
      ns[k] += gen.ns[k];
      nf[k] += gen.nf[k];
      crs[k].insert(crs[k].end(), gen.successful_cr[k].begin(), gen.successful_cr[k].end());
    }
  }
  state.probabilities = sade_probabilities(ns, nf, state.eps);
  for (std::size_t k = 0; k < k_count; ++k) {
    if (!crs[k].empty()) state.cr_median[k] = median(std::move(crs[k]));
  }
  return state.probabilities;
}

std::pair<double, double> sade_sample_params(const SadeState& state, std::size_t k,
                                             RandomSource& rng) {
  double f = rng.normal(0.5, 0.3);
  while (f <= 0.0) f = rng.normal(0.5, 0.3);
  const double cr = std::clamp(rng.normal(state.cr_median[k], 0.1), 0.0, 1.0);
  return {f, cr};
}

SadeEngine::SadeEngine(std::size_t learning_period)
    : state_(SadeState::standard(learning_period)) {}

void SadeEngine::reset(const Population& pop, RandomSource&) {
  const std::size_t lp = state_.learning_period;
  state_ = SadeState::standard(lp);
  choice_.assign(pop.size(), {});
}

void SadeEngine::begin_generation(std::size_t g, RandomSource&) {
  sade_update(state_, g);
  SadeState::GenerationMemory mem;
  mem.ns.assign(state_.size(), 0.0);
  mem.nf.assign(state_.size(), 0.0);
  mem.successful_cr.assign(state_.size(), {});
  state_.window.push_back(std::move(mem));
  while (state_.window.size() > state_.learning_period) state_.window.pop_front();
}

std::optional<Proposal> SadeEngine::propose(const GenerationView& view, std::size_t i,
                                            RandomSource& rng, Evaluator& eval) {
  if (eval.exhausted()) return std::nullopt;
  // Roulette over the strategy probabilities.
  const double u = rng.uniform();
  std::size_t k = 0;
  double acc = state_.probabilities[0];
  while (k + 1 < state_.size() && u >= acc) acc += state_.probabilities[++k];

  const auto [f, cr] = sade_sample_params(state_, k, rng);
  StrategySpec spec = state_.strategies[k];
  spec.f = f;
  spec.cr = cr;
  choice_[i] = {k, cr};
  return evaluate_proposal(make_trial(view, i, spec, rng), eval);
}

void SadeEngine::record(const Outcome& outcome, RandomSource&) {
  auto& mem = state_.window.back();
  const Choice& c = choice_[outcome.index];
  if (outcome.success) {
    mem.ns[c.k] += 1.0;
    mem.successful_cr[c.k].push_back(c.cr);
  } else {
    mem.nf[c.k] += 1.0;
  }
}

// ---------------------------------------------------------------------------
// JADE / SHADE

std::pair<double, double> jade_sample_params(double mu_f, double mu_cr, RandomSource& rng) {
  double f = cauchy_sample({mu_f, 0.1}, rng);
  while (f <= 0.0) f = cauchy_sample({mu_f, 0.1}, rng);
  if (f > 1.0) f = 1.0;
  const double cr = std::clamp(rng.normal(mu_cr, 0.1), 0.0, 1.0);
  return {f, cr};
}

std::pair<double, double> jade_update_means(double mu_f, double mu_cr,
                                            std::span<const double> s_f,
                                            std::span<const double> s_cr, double c) {
  if (s_f.empty() || s_cr.empty()) return {mu_f, mu_cr};
  return {(1.0 - c) * mu_f + c * lehmer_mean(s_f), (1.0 - c) * mu_cr + c * arithmetic_mean(s_cr)};
}

void shade_step_memory(ShadeMemory& memory, const SuccessSets& sets) {
  if (sets.empty()) return;
  memory.m_f[memory.cursor] = weighted_lehmer_mean(sets.f, sets.improvement);
  memory.m_cr[memory.cursor] = weighted_mean(sets.cr, sets.improvement);
  memory.cursor = (memory.cursor + 1) % memory.size();
}

JadeEngine::JadeEngine() : JadeEngine(Options{}) {}

JadeEngine::JadeEngine(Options options) : options_(options) {}

std::string JadeEngine::name() const {
  if (options_.kind == StrategyKind::current_to_pbest1) return "JADE";
  return "JADE-" + std::string(to_string(options_.kind));
}

void JadeEngine::reset(const Population& pop, RandomSource&) {
  mu_f_ = 0.5;
  mu_cr_ = 0.5;
  archive_.clear();
  archive_.set_capacity(options_.use_archive ? pop.size() : 0);
  params_.assign(pop.size(), {0.5, 0.5});
  success_.clear();
}

void JadeEngine::begin_generation(std::size_t, RandomSource&) { success_.clear(); }

std::optional<Proposal> JadeEngine::propose(const GenerationView& view, std::size_t i,
                                            RandomSource& rng, Evaluator& eval) {
  if (eval.exhausted()) return std::nullopt;
  const auto [f, cr] = jade_sample_params(mu_f_, mu_cr_, rng);
  params_[i] = {f, cr};
  StrategySpec spec;
  spec.kind = options_.kind;
  spec.f = f;
  spec.cr = cr;
  spec.p = options_.p;
  spec.use_archive = options_.use_archive;
  spec.crossover = options_.kind == StrategyKind::current_to_rand1 ? CrossoverKind::none
                                                                   : CrossoverKind::binomial;
  return evaluate_proposal(make_trial(view, i, spec, rng, &archive_), eval);
}

void JadeEngine::record(const Outcome& outcome, RandomSource& rng) {
  if (!outcome.success) return;
  if (options_.use_archive) archive_.add(outcome.target->x, rng);
  success_.f.push_back(params_[outcome.index].first);
  success_.cr.push_back(params_[outcome.index].second);
  success_.improvement.push_back(outcome.improvement());
}

void JadeEngine::end_generation(std::size_t, RandomSource&) {
  std::tie(mu_f_, mu_cr_) = jade_update_means(mu_f_, mu_cr_, success_.f, success_.cr, options_.c);
}

ShadeEngine::ShadeEngine(std::size_t h, double p) : h_(h), p_(p) {}

void ShadeEngine::reset(const Population& pop, RandomSource&) {
  memory_ = ShadeMemory(h_ ? h_ : pop.size());
  archive_.clear();
  archive_.set_capacity(pop.size());
  params_.assign(pop.size(), {0.5, 0.5});
  success_.clear();
}

void ShadeEngine::begin_generation(std::size_t, RandomSource&) { success_.clear(); }

std::optional<Proposal> ShadeEngine::propose(const GenerationView& view, std::size_t i,
                                             RandomSource& rng, Evaluator& eval) {
  if (eval.exhausted()) return std::nullopt;
  const std::size_t r = rng.index(memory_.size());
  const auto [f, cr] = jade_sample_params(memory_.m_f[r], memory_.m_cr[r], rng);
  params_[i] = {f, cr};
  StrategySpec spec{StrategyKind::current_to_pbest1, f, cr, CrossoverKind::binomial, p_, true};
  return evaluate_proposal(make_trial(view, i, spec, rng, &archive_), eval);
}

void ShadeEngine::record(const Outcome& outcome, RandomSource& rng) {
  if (!outcome.success) return;
  archive_.add(outcome.target->x, rng);
  success_.f.push_back(params_[outcome.index].first);
  success_.cr.push_back(params_[outcome.index].second);
  success_.improvement.push_back(outcome.improvement());
}

void ShadeEngine::end_generation(std::size_t, RandomSource&) {
  shade_step_memory(memory_, success_);
}

// ---------------------------------------------------------------------------
// EPSDE

StrategySpec EpsdeCombination::spec() const {
  StrategySpec s;
  s.kind = kind;
  s.f = f;
  s.cr = cr;
  s.crossover = kind == StrategyKind::current_to_rand1 ? CrossoverKind::none
                                                       : CrossoverKind::binomial;
  return s;
}

EpsdeCombination EpsdeState::fresh(RandomSource& rng) const {
  EpsdeCombination c;
  c.kind = strategies[rng.index(strategies.size())];
  c.f = f_pool[rng.index(f_pool.size())];
  c.cr = cr_pool[rng.index(cr_pool.size())];
  return c;
}

EpsdeCombination epsde_assign(EpsdeState& state, std::size_t i, bool success, RandomSource& rng) {
  if (success) return state.current[i];
  if (rng.index(2) == 0 || state.success_memory.empty()) {
    state.current[i] = state.fresh(rng);
  } else {
    state.current[i] = state.success_memory[rng.index(state.success_memory.size())];
  }
  return state.current[i];
}

void EpsdeEngine::reset(const Population& pop, RandomSource& rng) {
  state_.current.clear();
  state_.success_memory.clear();
  state_.memory_capacity = pop.size();
  for (std::size_t i = 0; i < pop.size(); ++i) state_.current.push_back(state_.fresh(rng));
}

std::optional<Proposal> EpsdeEngine::propose(const GenerationView& view, std::size_t i,
                                             RandomSource& rng, Evaluator& eval) {
  if (eval.exhausted()) return std::nullopt;
  return evaluate_proposal(make_trial(view, i, state_.current[i].spec(), rng), eval);
}

void EpsdeEngine::record(const Outcome& outcome, RandomSource& rng) {
  if (outcome.success) {
    state_.success_memory.push_back(state_.current[outcome.index]);
    while (state_.success_memory.size() > state_.memory_capacity) {
      state_.success_memory.pop_front();
    }
  }
  epsde_assign(state_, outcome.index, outcome.success, rng);
}

// ---------------------------------------------------------------------------
// CoDE

std::optional<Proposal> code_generate(const GenerationView& view, std::size_t i,
                                      const CodeConfig& cfg, Evaluator& eval, RandomSource& rng) {
  std::optional<Proposal> best;
  std::uint64_t spent = 0;
  for (const auto& base : cfg.strategies) {
    if (eval.exhausted()) break;
    const auto& [f, cr] = cfg.parameters[rng.index(cfg.parameters.size())];
    StrategySpec spec = base;
    spec.f = f;
    spec.cr = cr;
    Vector x = make_trial(view, i, spec, rng);
    const auto fx = eval(x);
    if (!fx) break;
    ++spent;
    if (!best || *fx < best->fitness) best = Proposal{std::move(x), *fx, 0};
  }
  if (best) best->evaluations = spent;
  return best;
}

std::optional<Proposal> CodeEngine::propose(const GenerationView& view, std::size_t i,
                                            RandomSource& rng, Evaluator& eval) {
  return code_generate(view, i, cfg_, eval, rng);
}

}  // namespace acmde
