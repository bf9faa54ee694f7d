#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace acmde {

/// Final FEVs of two algorithms on one function, paired by run index.
struct PairedSample {
  std::vector<double> a;
  std::vector<double> b;
};

enum class Verdict { plus, equals, minus };

/// "+", "=" or "-".
std::string_view symbol(Verdict v);

enum class PValueMethod { none, exact, normal };

std::string_view to_string(PValueMethod m);

struct ComparisonCell {
  Verdict verdict = Verdict::equals;
  double p_value = 1.0;
  /// Sum of ranks of positive differences a - b.
  double statistic = 0.0;
  /// Pairs left after dropping zero differences.
  std::size_t effective_n = 0;
  PValueMethod method = PValueMethod::none;
};

/// Largest effective n handled by full enumeration.
inline constexpr std::size_t kExactLimit = 12;

/// Two-sided Wilcoxon signed-rank test on d = a - b with average ranks for
/// ties and zero differences dropped. Exact enumeration up to kExactLimit
/// pairs, normal approximation (tie and continuity corrected) above. The
/// verdict is plus when p < alpha and a is better (lower median; rank sums
/// decide equal medians), minus when b is better, equals otherwise.
/// Throws std::invalid_argument on length mismatch.
ComparisonCell wilcoxon_signed_rank(const PairedSample& sample, double alpha = 0.05);

/// Forces one p-value route, for cross-checking the two.
ComparisonCell wilcoxon_signed_rank(const PairedSample& sample, double alpha,
                                    PValueMethod method);

struct Tally {
  std::size_t plus = 0;
  std::size_t equals = 0;
  std::size_t minus = 0;

  void add(Verdict v);
  /// "plus/equals/minus".
  std::string str() const;
};

double sample_mean(const std::vector<double>& v);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_stddev(const std::vector<double>& v);

struct TableCell {
  double mean = 0.0;
  double stddev = 0.0;
  std::optional<ComparisonCell> comparison;  // absent for the reference column
  bool best_mean = false;
};

/// Per-function comparison of a reference algorithm against the others,
/// with one +/=/- tally per comparison column.
struct ComparisonTable {
  std::string reference;
  std::vector<std::string> algorithms;  // reference first
  std::vector<std::string> functions;
  /// cells[f][a]; nullopt when that run set is missing.
  std::vector<std::vector<std::optional<TableCell>>> cells;
  std::vector<Tally> tallies;  // one per algorithm, reference entry unused

  /// Aligned plain-text table with the tally footer.
  std::string to_text() const;
  /// function,algorithm,mean,std,verdict,p_value
  std::string to_csv() const;
};

/// Final FEVs keyed by (algorithm, function).
using RunMatrix = std::map<std::pair<std::string, std::string>, std::vector<double>>;

/// Compares `reference` against every other algorithm on every function.
/// Cells with missing data or mismatched run counts are reported absent and
/// excluded from the tally.
ComparisonTable build_comparison_table(const RunMatrix& runs, const std::string& reference,
                                       const std::vector<std::string>& algorithms,
                                       const std::vector<std::string>& functions,
                                       double alpha = 0.05);

/// Percentile with linear interpolation between order statistics, q in [0, 1].
double percentile(std::vector<double> values, double q);

}  // namespace acmde
