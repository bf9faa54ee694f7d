#include "acmde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace acmde {

std::string_view symbol(Verdict v) {
  switch (v) {
    case Verdict::plus: return "+";
    case Verdict::equals: return "=";
    case Verdict::minus: return "-";
  }
  return "?";
}

std::string_view to_string(PValueMethod m) {
  switch (m) {
    case PValueMethod::none: return "none";
    case PValueMethod::exact: return "exact";
    case PValueMethod::normal: return "normal";
  }
  return "?";
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Exact two-sided p by enumerating every sign assignment. Ranks are doubled
// so tied (half-integer) ranks stay integral and the tails compare exactly.
double exact_p(const std::vector<std::int64_t>& ranks2, std::int64_t w2) {
  const std::size_t n = ranks2.size();
  const std::uint64_t total = std::uint64_t{1} << n;
  std::uint64_t le = 0;
  std::uint64_t ge = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (std::uint64_t{1} << k)) s += ranks2[k];
    }
    if (s <= w2) ++le;
    if (s >= w2) ++ge;
  }
  const double tail = static_cast<double>(std::min(le, ge)) / static_cast<double>(total);
  return std::min(1.0, 2.0 * tail);
}

double normal_p(const std::vector<std::int64_t>& ranks2, std::int64_t w2,
                const std::vector<std::size_t>& tie_sizes) {
  const double n = static_cast<double>(ranks2.size());
  const auto mean2 = static_cast<std::int64_t>(ranks2.size() * (ranks2.size() + 1) / 2);
  double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
  for (std::size_t t : tie_sizes) {
    const double td = static_cast<double>(t);
    var -= (td * td * td - td) / 48.0;
  }
  if (!(var > 0.0)) return 1.0;
  const double deviation = static_cast<double>(std::llabs(w2 - mean2)) / 2.0;
  const double z = std::max(0.0, deviation - 0.5) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

}  // namespace

ComparisonCell wilcoxon_signed_rank(const PairedSample& sample, double alpha) {
  return wilcoxon_signed_rank(sample, alpha, PValueMethod::none);
}

ComparisonCell wilcoxon_signed_rank(const PairedSample& sample, double alpha,
                                    PValueMethod method) {
  if (sample.a.size() != sample.b.size()) {
    throw std::invalid_argument("wilcoxon: samples differ in length");
  }
  std::vector<double> d;
  for (std::size_t k = 0; k < sample.a.size(); ++k) {
    const double diff = sample.a[k] - sample.b[k];
    if (diff != 0.0) d.push_back(diff);
  }

  ComparisonCell cell;
  cell.effective_n = d.size();
  if (d.empty()) return cell;

  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return std::abs(d[x]) < std::abs(d[y]); });

  std::vector<std::int64_t> ranks2(d.size());
  std::vector<std::size_t> tie_sizes;
  for (std::size_t first = 0; first < order.size();) {
    std::size_t last = first;
    while (last + 1 < order.size() && std::abs(d[order[last + 1]]) == std::abs(d[order[first]])) {
      ++last;
    }
    // Average of 1-based ranks first+1 .. last+1, doubled.
    const auto avg2 = static_cast<std::int64_t>(first + last + 2);
    for (std::size_t k = first; k <= last; ++k) ranks2[order[k]] = avg2;
    if (last > first) tie_sizes.push_back(last - first + 1);
    first = last + 1;
  }

  std::int64_t w_plus2 = 0;
  std::int64_t total2 = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    total2 += ranks2[k];
    if (d[k] > 0.0) w_plus2 += ranks2[k];
  }
  cell.statistic = static_cast<double>(w_plus2) / 2.0;

  if (method == PValueMethod::none) {
    method = d.size() <= kExactLimit ? PValueMethod::exact : PValueMethod::normal;
  }
  cell.method = method;
  cell.p_value = method == PValueMethod::exact ? exact_p(ranks2, w_plus2)
                                               : normal_p(ranks2, w_plus2, tie_sizes);

  if (cell.p_value < alpha) {
    const double ma = median_of(sample.a);
    const double mb = median_of(sample.b);
    bool a_better = ma < mb;
    if (ma == mb) a_better = 2 * w_plus2 < total2;
    const bool b_better = ma > mb || (ma == mb && 2 * w_plus2 > total2);
    cell.verdict = a_better ? Verdict::plus : b_better ? Verdict::minus : Verdict::equals;
  }
  return cell;
}

void Tally::add(Verdict v) {
  switch (v) {
    case Verdict::plus: ++plus; break;
    case Verdict::equals: ++equals; break;
    case Verdict::minus: ++minus; break;
  }
}

std::string Tally::str() const {
  return std::to_string(plus) + "/" + std::to_string(equals) + "/" + std::to_string(minus);
}

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

ComparisonTable build_comparison_table(const RunMatrix& runs, const std::string& reference,
                                       const std::vector<std::string>& algorithms,
                                       const std::vector<std::string>& functions, double alpha) {
  ComparisonTable table;
  table.reference = reference;
  table.algorithms.push_back(reference);
  for (const auto& a : algorithms) {
    if (a != reference) table.algorithms.push_back(a);
  }
  table.functions = functions;
  table.tallies.assign(table.algorithms.size(), {});

  for (const auto& fn : functions) {
    std::vector<std::optional<TableCell>> row(table.algorithms.size());
    const auto ref_it = runs.find({reference, fn});
    for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
      const auto it = runs.find({table.algorithms[a], fn});
      if (it == runs.end() || it->second.empty()) continue;
      TableCell cell;
      cell.mean = sample_mean(it->second);
      cell.stddev = sample_stddev(it->second);
      if (a > 0) {
        if (ref_it == runs.end() || ref_it->second.size() != it->second.size()) continue;
        cell.comparison = wilcoxon_signed_rank({ref_it->second, it->second}, alpha);
        table.tallies[a].add(cell.comparison->verdict);
      }
      row[a] = cell;
    }
    double best = INFINITY;
    for (const auto& c : row) {
      if (c) best = std::min(best, c->mean);
    }
    for (auto& c : row) {
      if (c && c->mean == best) c->best_mean = true;
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2E", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string ComparisonTable::to_text() const {
  constexpr std::size_t kFirst = 16;
  constexpr std::size_t kCol = 30;
  std::ostringstream out;
  out << pad("", kFirst);
  for (const auto& a : algorithms) out << pad(a, kCol);
  out << "\n" << pad("", kFirst);
  for (std::size_t a = 0; a < algorithms.size(); ++a) out << pad("MEAN (STD DEV)", kCol);
  out << "\n";
  for (std::size_t f = 0; f < functions.size(); ++f) {
    out << pad(functions[f], kFirst);
    for (const auto& c : cells[f]) {
      std::string s = "n/a";
      if (c) {
        s = (c->best_mean ? "*" : "") + sci(c->mean) + " (" + sci(c->stddev) + ")";
        if (c->comparison) s += " " + std::string(symbol(c->comparison->verdict));
      }
      out << pad(s, kCol);
    }
    out << "\n";
  }
  out << pad("+/=/-", kFirst) << pad("", kCol);
  for (std::size_t a = 1; a < algorithms.size(); ++a) out << pad(tallies[a].str(), kCol);
  out << "\n";
  out << "* lowest mean; +/=/- compare " << reference
      << " against each column (Wilcoxon signed-rank, two-sided)\n";
  return out.str();
}

std::string ComparisonTable::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "function,algorithm,mean,std,verdict,p_value,p_method\n";
  for (std::size_t f = 0; f < functions.size(); ++f) {
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      const auto& c = cells[f][a];
      if (!c) continue;
      out << functions[f] << ',' << algorithms[a] << ',' << c->mean << ',' << c->stddev << ',';
      if (c->comparison) {
        out << symbol(c->comparison->verdict) << ',' << c->comparison->p_value << ','
            << to_string(c->comparison->method);
      } else {
        out << "ref,,";
      }
      out << '\n';
    }
  }
  return out.str();
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile: empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace acmde
