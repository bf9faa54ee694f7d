// Acceptance checks, one PASS/FAIL line each. Exit status is the number of
// failures.

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "acmde/bench.hpp"
#include "acmde/cauchy.hpp"
#include "acmde/experiment.hpp"
#include "acmde/optimizer.hpp"
#include "acmde/stats.hpp"
#include "acmde/strategies.hpp"
#include "support/scripted_random.hpp"

using namespace acmde;
using acmde::testing::RecordingSource;
using acmde::testing::ReplaySource;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void schedule_values() {
  const ScheduleSpec s{ScheduleFamily::sftd, 100.0, 5.0, -6.0, 6.0};
  const std::size_t g_max = 1000;
  const double t0 = threshold(s, 0, g_max);
  const double th = threshold(s, g_max / 2, g_max);
  const double t1 = threshold(s, g_max, g_max);
  // Hand form: ft_init - (ft_init - ft_fin) * logistic(lb + (ub - lb) g / g_max).
  auto hand = [](double x) { return 100.0 - 95.0 * logistic(-6.0 + 12.0 * x); };
  const bool ok = std::abs(t0 - 99.7651) <= 1e-3 && std::abs(th - 52.5) <= 1e-12 &&
                  std::abs(t1 - 5.2349) <= 1e-3 && std::abs(t0 - hand(0.0)) < 1e-12 &&
                  std::abs(t1 - hand(1.0)) < 1e-12;
  report(1, ok, fmt("FT(0)=%.6f FT(mid)=%.12f FT(end)=%.6f", t0, th, t1));
}

void cauchy_ks() {
  Mt64Source rng(2019);
  const CauchyParams p{0.0, 1.0};
  std::vector<double> xs(100000);
  for (double& x : xs) x = cauchy_sample(p, rng);
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double ks = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double cdf = 0.5 + std::atan(xs[k]) / std::numbers::pi;
    ks = std::max({ks, std::abs(cdf - k / n), std::abs((k + 1) / n - cdf)});
  }
  report(2, ks < 0.02, fmt("KS=%.5f over %zu samples", ks, xs.size()));
}

void crossover_laws() {
  Mt64Source rng(3);
  constexpr std::size_t d = 30;
  const Vector target(d, 0.0), mutant(d, 1.0);
  bool forced = true;
  for (int k = 0; k < 100000; ++k) {
    const Vector t = crossover_binomial(target, mutant, 0.0, rng);
    double taken = 0.0;
    for (double v : t) taken += v;
    forced = forced && taken == 1.0;
    const Vector u = crossover_binomial(target, mutant, rng.uniform(), rng);
    forced = forced && std::count(u.begin(), u.end(), 1.0) >= 1;
  }

  constexpr std::size_t dim = 10;
  constexpr double cr = 0.7;
  constexpr int trials = 100000;
  std::vector<double> counts(dim + 1, 0.0);
  for (int k = 0; k < trials; ++k) counts[draw_exponential_segment(dim, cr, rng).length] += 1.0;
  double chi2 = 0.0;
  for (std::size_t l = 1; l <= dim; ++l) {
    const double p = l < dim ? std::pow(cr, double(l - 1)) * (1.0 - cr) : std::pow(cr, double(dim - 1));
    const double e = p * trials;
    chi2 += (counts[l] - e) * (counts[l] - e) / e;
  }
  const boost::math::chi_squared dist(static_cast<double>(dim - 1));
  const double pv = boost::math::cdf(boost::math::complement(dist, chi2));
  report(3, forced && pv > 0.01,
         fmt("binomial forced component %s on 1e5 trials, exponential chi2=%.3f p=%.4f",
             forced ? "held" : "violated", chi2, pv));
}

// Straight-line DE/rand/1/bin generation: rejection-sampled donors, j_rand,
// one uniform per component, midpoint repair, then <= selection for all.
std::vector<Individual> reference_generation(const std::vector<Individual>& pop, double lo, double hi,
                                             double f, double cr, RandomSource& rng) {
  const std::size_t np = pop.size();
  const std::size_t d = pop[0].x.size();
  std::vector<Vector> trials(np);
  for (std::size_t i = 0; i < np; ++i) {
    std::size_t r1, r2, r3;
    do r1 = rng.index(np); while (r1 == i);
    do r2 = rng.index(np); while (r2 == i || r2 == r1);
    do r3 = rng.index(np); while (r3 == i || r3 == r1 || r3 == r2);
    const std::size_t jr = rng.index(d);
    Vector u(pop[i].x);
    for (std::size_t j = 0; j < d; ++j) {
      const double v = pop[r1].x[j] + f * (pop[r2].x[j] - pop[r3].x[j]);
      if (rng.uniform() < cr || j == jr) u[j] = v;
      if (u[j] < lo) u[j] = (lo + pop[i].x[j]) / 2.0;
      if (u[j] > hi) u[j] = (hi + pop[i].x[j]) / 2.0;
    }
    trials[i] = u;
  }
  std::vector<Individual> next = pop;
  for (std::size_t i = 0; i < np; ++i) {
    double fu = 0.0;
    for (double v : trials[i]) fu += v * v;
    if (fu <= *pop[i].fitness) next[i] = Individual{trials[i], fu, 0};
    else next[i].fc = pop[i].fc + 1;
  }
  return next;
}

void oracle_equivalence() {
  const Bounds b = Bounds::uniform(5, -5.0, 5.0);
  bool ok = true;
  std::size_t compared = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Mt64Source init(seed);
    Population pop = initialize(b, 8, init);
    for (auto& m : pop.members) m.fitness = sphere(m.x);
    const std::vector<Individual> before = pop.members;

    StrategySpec spec;  // rand/1/bin, F = CR = 0.5
    spec.f = seed % 2 ? 0.5 : 1.8;  // large F forces repairs
    ClassicEngine engine(spec);
    Mt64Source live(seed * 7919);
    RecordingSource rec(live);
    Evaluator eval([](std::span<const double> x) { return sphere(x); }, 1000);
    engine.reset(pop, rec);
    step(pop, b, engine, CauchyOptions{}, eval, rec, 10);

    ReplaySource replay(rec.log);
    std::vector<Individual> ref;
    try {
      ref = reference_generation(before, -5.0, 5.0, spec.f, spec.cr, replay);
    } catch (const std::exception&) {
      ok = false;
      continue;
    }
    ok = ok && replay.consumed() == replay.size();
    for (std::size_t i = 0; i < 8; ++i) {
      ok = ok && pop.members[i].x == ref[i].x && *pop.members[i].fitness == *ref[i].fitness &&
           pop.members[i].fc == ref[i].fc;
      ++compared;
    }
  }
  report(4, ok, fmt("%zu members over 20 seeded generations compared bit-exactly", compared));
}

void wilcoxon_exactness() {
  const auto c6 = wilcoxon_signed_rank({{1, 2, 3, 4, 5, 6}, {2, 3, 4, 5, 6, 7.5}});
  const auto c5 = wilcoxon_signed_rank({{1, 2, 3, 4, 5}, {3, 4, 5, 6, 7}});
  // Enumeration oracle: one-sided extreme, two-sided p = 2 / 2^n.
  const bool exact = c6.p_value == 2.0 / 64.0 && c5.p_value == 2.0 / 32.0 &&
                     c6.verdict == Verdict::plus && c5.verdict == Verdict::equals;
  Mt64Source rng(5);
  bool anti = true;
  for (int k = 0; k < 100; ++k) {
    PairedSample s;
    const std::size_t n = 3 + rng.index(30);
    const double shift = 0.5 * (rng.uniform() - 0.5);
    for (std::size_t j = 0; j < n; ++j) {
      s.a.push_back(rng.uniform() + shift);
      s.b.push_back(rng.uniform());
    }
    const auto x = wilcoxon_signed_rank(s);
    const auto y = wilcoxon_signed_rank({s.b, s.a});
    const bool flipped = (x.verdict == Verdict::plus && y.verdict == Verdict::minus) ||
                         (x.verdict == Verdict::minus && y.verdict == Verdict::plus) ||
                         (x.verdict == Verdict::equals && y.verdict == Verdict::equals);
    anti = anti && flipped && x.p_value == y.p_value;
  }
  report(5, exact && anti,
         fmt("p(n=5)=%.6g p(n=6)=%.6g, antisymmetry %s on 100 samples", c5.p_value, c6.p_value,
             anti ? "held" : "broken"));
}

std::vector<double> finals(const std::vector<RunRecord>& records, const std::string& alg) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.algorithm == alg) out.push_back(r.final_fev);
  }
  return out;
}

void desk_scale() {
  const ExperimentConfig config = preset("acceptance");
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult first = run_experiment(config, false);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto acm = finals(first.records, "ACM-DE/rand/1/bin");
  const auto de = finals(first.records, "DE/rand/1/bin");
  const auto sfti = finals(first.records, "SFTI-DE/rand/1/bin");
  const double m_acm = percentile(acm, 0.5);
  const double m_de = percentile(de, 0.5);
  const double m_sfti = percentile(sfti, 0.5);
  const auto cell = wilcoxon_signed_rank({acm, de}, config.alpha);
  const bool ok6 = acm.size() == 15 && de.size() == 15 && m_acm <= m_de && cell.verdict != Verdict::minus;
  report(6, ok6,
         fmt("median FEV ACM-DE=%.4g DE=%.4g, verdict %s p=%.3g (%s), %.1fs", m_acm, m_de,
             std::string(symbol(cell.verdict)).c_str(), cell.p_value,
             std::string(to_string(cell.method)).c_str(), secs));

  // The ACM column runs the decreasing sigmoid schedule.
  const bool sftd = config.algorithms[0].cauchy.acm.schedule.family == ScheduleFamily::sftd;
  report(7, sftd && sfti.size() == 15 && m_acm <= m_sfti,
         fmt("median FEV SFTD=%.4g SFTI=%.4g over 15 paired seeds", m_acm, m_sfti));

  std::size_t mono = 0, budget = 0, over = 0;
  for (const auto& r : first.records) {
    mono += r.monotonicity_violations;
    budget += r.budget_violations;
    if (r.nfe > *config.nfe_max) ++over;
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      if (r.trace[k].fev > r.trace[k - 1].fev) ++mono;
    }
  }
  report(8, mono == 0 && budget == 0 && over == 0,
         fmt("%zu runs: %zu monotonicity, %zu budget violations, %zu over nfe_max",
             first.records.size(), mono, budget, over));

  const ExperimentResult second = run_experiment(config, false);
  report(9, !first.summary_csv.empty() && first.summary_csv == second.summary_csv,
         fmt("summary.csv %zu bytes, rerun %s", first.summary_csv.size(),
             first.summary_csv == second.summary_csv ? "identical" : "differs"));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> checks{schedule_values, cauchy_ks, crossover_laws,
                                                  oracle_equivalence, wilcoxon_exactness,
                                                  desk_scale};
  for (const auto& c : checks) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("error: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d failure(s)\n", failures);
  return failures;
}
