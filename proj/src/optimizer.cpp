#include "acmde/optimizer.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "acmde/bench.hpp"
#include "acmde/error.hpp"

namespace acmde {

std::vector<std::vector<std::size_t>> Engine::groups(const Population& pop) {
  std::vector<std::size_t> all(pop.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return {std::move(all)};
}

std::optional<Proposal> evaluate_proposal(Vector x, Evaluator& eval) {
  auto f = eval(x);
  if (!f) return std::nullopt;
  return Proposal{std::move(x), *f, 1};
}

ClassicEngine::ClassicEngine(StrategySpec spec) : spec_(spec) { spec_.validate(); }

std::string ClassicEngine::name() const {
  std::string n = "DE/" + std::string(to_string(spec_.kind));
  if (spec_.crossover != CrossoverKind::none) n += "/" + std::string(to_string(spec_.crossover));
  return n;
}

void ClassicEngine::reset(const Population& pop, RandomSource&) {
  archive_.clear();
  archive_.set_capacity(spec_.use_archive ? pop.size() : 0);
}

std::optional<Proposal> ClassicEngine::propose(const GenerationView& view, std::size_t i,
                                               RandomSource& rng, Evaluator& eval) {
  if (eval.exhausted()) return std::nullopt;
  return evaluate_proposal(make_trial(view, i, spec_, rng, &archive_), eval);
}

void ClassicEngine::record(const Outcome& outcome, RandomSource& rng) {
  if (outcome.success && spec_.use_archive) archive_.add(outcome.target->x, rng);
}

StepReport step(Population& pop, const Bounds& bounds, Engine& engine,
                const CauchyOptions& cauchy, Evaluator& eval, RandomSource& rng,
                std::size_t g_max) {
  const std::size_t np = pop.size();
  const std::size_t g = pop.g + 1;
  StepReport report;
  report.threshold = cauchy.threshold_at(g, g_max);

  engine.begin_generation(g, rng);
  const GenerationView full = make_full_view(pop, bounds);

  struct Pending {
    std::optional<Proposal> proposal;
    bool from_engine = false;
  };
  std::vector<Pending> pending(np);

  for (auto& members : engine.groups(pop)) {
    const GenerationView view = make_view(pop, bounds, std::move(members));
    for (std::size_t i : view.members) {
      const Individual& target = pop.members[i];
      if (cauchy.mode != CauchyMode::none && should_fire(target.fc, report.threshold)) {
        if (eval.exhausted()) continue;
        Vector x = cauchy.mode == CauchyMode::cm
                       ? cm_trial(target, full.at(full.best()), bounds, rng, cauchy.cm_gamma)
                       : acm_trial(target, full, cauchy.acm, rng);
        pending[i].proposal = evaluate_proposal(std::move(x), eval);
        if (pending[i].proposal) ++report.cauchy_trials;
      } else {
        pending[i].proposal = engine.propose(view, i, rng, eval);
        pending[i].from_engine = true;
        if (pending[i].proposal) ++report.engine_trials;
      }
    }
  }

  // Selection commits after every trial exists, so all donors above came
  // from the generation-start snapshot.
  for (std::size_t i = 0; i < np; ++i) {
    auto& p = pending[i];
    if (!p.proposal) {
      ++report.skipped;
      continue;
    }
    Individual trial{std::move(p.proposal->x), p.proposal->fitness, 0};
    const Individual target = pop.members[i];
    Selection sel = select(target, trial);
    if (sel.success) ++report.successes;
    pop.members[i] = std::move(sel.winner);
    if (p.from_engine) {
      Outcome out;
      out.index = i;
      out.success = sel.success;
      out.target = &target;
      out.trial_fitness = *trial.fitness;
      out.evaluations = p.proposal->evaluations;
      engine.record(out, rng);
    }
  }

  engine.end_generation(g, rng);
  pop.g = g;
  pop.nfe = eval.used();
  return report;
}

StepReport acm_de_step(Population& pop, const Bounds& bounds, const StrategySpec& base,
                       const AcmConfig& cfg, Evaluator& eval, RandomSource& rng,
                       std::size_t g_max) {
  ClassicEngine engine(base);
  CauchyOptions cauchy;
  cauchy.mode = CauchyMode::acm;
  cauchy.acm = cfg;
  return step(pop, bounds, engine, cauchy, eval, rng, g_max);
}

std::size_t generation_horizon(const Budget& budget, std::size_t np, double evals_per_member) {
  if (budget.g_max) return *budget.g_max;
  const double per_generation = static_cast<double>(np) * evals_per_member;
  const double after_init =
      *budget.nfe_max > np ? static_cast<double>(*budget.nfe_max - np) : 0.0;
  const auto h = static_cast<std::size_t>(std::ceil(after_init / per_generation));
  return h == 0 ? 1 : h;
}

RunResult optimize(const ObjectiveFn& objective, const Bounds& bounds, Engine& engine,
                   const RunSettings& settings, RandomSource& rng) {
  settings.budget.validate();
  settings.cauchy.validate();
  if (settings.np < engine.min_members()) {
    throw ConfigError(engine.name() + " needs a population of at least " +
                      std::to_string(engine.min_members()));
  }

  // Independent call counter for the budget-honesty check.
  std::uint64_t raw_calls = 0;
  ObjectiveFn counted = [&](std::span<const double> x) {
    ++raw_calls;
    return objective(x);
  };

  const std::uint64_t limit =
      settings.budget.nfe_max ? *settings.budget.nfe_max : std::numeric_limits<std::uint64_t>::max();
  Evaluator eval(counted, limit);

  RunResult result;
  const std::uint64_t interval = settings.trace_interval ? settings.trace_interval : settings.np;
  double best_so_far = std::numeric_limits<double>::infinity();
  eval.set_observer([&](std::uint64_t nfe, double f) {
    if (f < best_so_far) best_so_far = f;
    if (nfe % interval == 0) result.trace.push_back({nfe, fev(settings.f_star, best_so_far)});
  });

  Population pop = initialize(bounds, settings.np, rng);
  if (!evaluate_population(pop, eval)) {
    throw ConfigError("budget smaller than the initial population");
  }
  engine.reset(pop, rng);

  const std::size_t g_max =
      generation_horizon(settings.budget, settings.np, engine.evaluations_per_member());
  result.g_max = g_max;

  double previous_best = pop.best_fitness();
  while (!settings.budget.exhausted(pop.g, eval.used())) {
    const StepReport report = step(pop, bounds, engine, settings.cauchy, eval, rng, g_max);
    result.cauchy_trials += report.cauchy_trials;
    const double best = pop.best_fitness();
    if (best > previous_best) ++result.monotonicity_violations;
    previous_best = best;
    if (report.cauchy_trials + report.engine_trials == 0) break;
  }

  if (settings.budget.nfe_max && raw_calls > *settings.budget.nfe_max) ++result.budget_violations;
  if (raw_calls != eval.used()) ++result.budget_violations;

  const std::size_t b = pop.best_index();
  result.best_x = pop.members[b].x;
  result.best_fitness = *pop.members[b].fitness;
  result.final_fev = fev(settings.f_star, result.best_fitness);
  result.nfe = eval.used();
  result.generations = pop.g;
  if (result.trace.empty() || result.trace.back().nfe != result.nfe) {
    result.trace.push_back({result.nfe, fev(settings.f_star, best_so_far)});
  }
  return result;
}

}  // namespace acmde
