#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acmde/cauchy.hpp"
#include "acmde/engine.hpp"
#include "acmde/optimizer.hpp"
#include "acmde/stats.hpp"
#include "acmde/strategies.hpp"

namespace acmde {

/// One algorithm column of an experiment.
struct AlgorithmSpec {
  /// Label used in outputs and seed derivation; must be unique.
  std::string id;
  /// de, sade, epsde, code, jade, shade, mpede or edev.
  std::string variant = "de";
  /// Mutation/crossover/F/CR for variant "de"; ignored otherwise.
  StrategySpec strategy;
  std::size_t np = 100;
  CauchyOptions cauchy;
  /// Free text carried into the archive, e.g. where a setting came from.
  std::string note;
};

/// A reference algorithm compared against a list of others.
struct ComparisonGroup {
  std::string reference;
  std::vector<std::string> against;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<AlgorithmSpec> algorithms;
  std::vector<std::string> functions;
  std::vector<std::size_t> dimensions{30};
  std::size_t runs = 51;
  /// Evaluation budget; defaults to nfe_per_dimension * D.
  std::optional<std::uint64_t> nfe_max;
  std::uint64_t nfe_per_dimension = 10000;
  /// Optional generation cap on top of the evaluation budget.
  std::optional<std::size_t> g_max;
  std::uint64_t seed = 1;
  /// Trace sampling period in evaluations; 0 means NP.
  std::uint64_t trace_interval = 0;
  double alpha = 0.05;
  std::size_t workers = 1;
  std::filesystem::path out_dir = "results";
  std::optional<std::filesystem::path> cec_data_dir;
  /// Empty means one group: the first algorithm against all others.
  std::vector<ComparisonGroup> comparisons;

  Budget budget_for(std::size_t d) const;
  std::vector<ComparisonGroup> effective_comparisons() const;
  /// Checks every id, function, dimension and population size; throws
  /// ConfigError on the first problem.
  void validate() const;
};

/// JSON text in and out; unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
std::string dump_config(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Built-in desk-scale presets: table1 .. table8 and acceptance.
std::vector<std::string> preset_names();
ExperimentConfig preset(std::string_view name);

std::unique_ptr<Engine> make_engine(const AlgorithmSpec& spec);

/// Seed of one run, independent of which other cells exist.
std::uint64_t derive_seed(std::uint64_t master, std::string_view algorithm,
                          std::string_view function, std::size_t d, std::size_t run);

struct RunRecord {
  std::string algorithm;
  std::string function;
  std::size_t dimension = 0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double final_fev = 0.0;
  std::uint64_t nfe = 0;
  std::size_t generations = 0;
  std::vector<TracePoint> trace;
  double wall_seconds = 0.0;
  std::size_t monotonicity_violations = 0;
  std::size_t budget_violations = 0;
};

/// One comparison table per (group, dimension).
struct TableReport {
  std::size_t dimension = 0;
  ComparisonTable table;
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // ordered by algorithm, function, D, run
  std::vector<TableReport> tables;
  std::string summary_csv;
};

/// Runs every (algorithm, function, D, run) cell. Configuration problems are
/// reported before the first run. When `write` is set, the archive goes to
/// config.out_dir: runs.csv, summary.csv, table.txt, table.csv, timing.csv,
/// config.json and one trace file per run.
ExperimentResult run_experiment(const ExperimentConfig& config, bool write = true);

/// summary.csv body: algorithm,function,D,mean,std,verdict.
std::string summary_csv(const ExperimentConfig& config, const std::vector<RunRecord>& records,
                        const std::vector<TableReport>& tables);

std::string trace_file_name(const RunRecord& record);
std::string cell_label(std::string_view algorithm, std::string_view function, std::size_t d);

/// Reads runs.csv and the trace files of an archive directory.
std::vector<RunRecord> load_archive(const std::filesystem::path& dir);

/// Per-evaluation-count quartiles of the best FEV across runs.
struct QuantileCurves {
  std::vector<std::uint64_t> nfe;
  std::vector<double> q25;
  std::vector<double> q50;
  std::vector<double> q75;

  std::string to_csv() const;
};

/// Throws std::invalid_argument on an empty list or traces sampled on
/// different grids.
QuantileCurves trace_quantiles(const std::vector<RunRecord>& records);

/// Writes quantiles_<cell>.csv for every cell of `records` into `dir`;
/// returns the file names.
std::vector<std::string> write_quantiles(const std::vector<RunRecord>& records,
                                         const std::filesystem::path& dir);

/// Compares the first algorithm of archive A against every algorithm of both
/// archives, per dimension. Ids of B that clash with A get a "B:" prefix.
std::vector<TableReport> compare_archives(const std::vector<RunRecord>& a,
                                          const std::vector<RunRecord>& b, double alpha = 0.05);

std::string render_tables(const std::vector<TableReport>& tables);

}  // namespace acmde
