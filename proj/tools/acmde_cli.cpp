// Command-line front end for experiments, archive comparison and quantiles.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "acmde/error.hpp"
#include "acmde/experiment.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> runs;
  std::optional<std::string> out;
};

void apply(acmde::ExperimentConfig& config, const Overrides& o) {
  if (o.seed) config.seed = *o.seed;
  if (o.workers) config.workers = *o.workers;
  if (o.runs) config.runs = *o.runs;
  if (o.out) config.out_dir = *o.out;
}

int run(const std::string& config_path, const std::string& preset_name, const Overrides& o,
        bool quiet) {
  acmde::ExperimentConfig config =
      preset_name.empty() ? acmde::load_config(config_path) : acmde::preset(preset_name);
  apply(config, o);
  const auto result = acmde::run_experiment(config);
  std::size_t violations = 0;
  for (const auto& r : result.records) {
    violations += r.monotonicity_violations + r.budget_violations;
  }
  if (!quiet) std::cout << acmde::render_tables(result.tables);
  std::cout << result.records.size() << " runs written to " << config.out_dir.string() << "\n";
  if (violations) {
    std::cerr << "warning: " << violations << " invariant violations recorded\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential evolution with Cauchy mutation: experiment harness"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string config_path;
  std::string preset_name;
  bool quiet = false;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment from a config file or preset");
  run_cmd->add_option("config", config_path, "JSON experiment config");
  run_cmd->add_option("--preset", preset_name, "Built-in preset instead of a config file");
  run_cmd->add_option("--seed", overrides.seed, "Master seed");
  run_cmd->add_option("--workers", overrides.workers, "Parallel runs")->check(CLI::PositiveNumber);
  run_cmd->add_option("--runs", overrides.runs, "Runs per cell")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", overrides.out, "Output directory");
  run_cmd->add_flag("--quiet", quiet, "Do not print the tables");

  std::string archive_a;
  std::string archive_b;
  double alpha = 0.05;
  std::string compare_out;
  auto* compare_cmd = app.add_subcommand("compare", "Wilcoxon comparison of two archives");
  compare_cmd->add_option("archiveA", archive_a, "Archive whose first algorithm is the reference")
      ->required();
  compare_cmd->add_option("archiveB", archive_b, "Second archive")->required();
  compare_cmd->add_option("--alpha", alpha, "Significance level");
  compare_cmd->add_option("--out", compare_out, "Also write the table text to this file");

  std::string quant_archive;
  std::string quant_out;
  auto* quant_cmd = app.add_subcommand("quantiles", "Median and IQR curves of an archive");
  quant_cmd->add_option("archive", quant_archive, "Archive directory")->required();
  quant_cmd->add_option("--out", quant_out, "Output directory (default: the archive)");

  std::string show_name;
  auto* preset_cmd = app.add_subcommand("preset", "Print a preset as a JSON config");
  preset_cmd->add_option("name", show_name, "Preset name; omit to list them");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      if (config_path.empty() == preset_name.empty()) {
        std::cerr << "run: give exactly one of <config> or --preset\n";
        return 2;
      }
      return run(config_path, preset_name, overrides, quiet);
    }
    if (*compare_cmd) {
      const auto tables =
          acmde::compare_archives(acmde::load_archive(archive_a), acmde::load_archive(archive_b), alpha);
      const std::string text = acmde::render_tables(tables);
      std::cout << text;
      if (!compare_out.empty()) {
        std::FILE* f = std::fopen(compare_out.c_str(), "wb");
        if (!f) throw std::runtime_error("cannot write " + compare_out);
        std::fputs(text.c_str(), f);
        std::fclose(f);
      }
      return 0;
    }
    if (*quant_cmd) {
      const auto records = acmde::load_archive(quant_archive);
      for (const auto& name :
           acmde::write_quantiles(records, quant_out.empty() ? quant_archive : quant_out)) {
        std::cout << name << "\n";
      }
      return 0;
    }
    if (*preset_cmd) {
      if (show_name.empty()) {
        for (const auto& n : acmde::preset_names()) std::cout << n << "\n";
      } else {
        std::cout << acmde::dump_config(acmde::preset(show_name));
      }
      return 0;
    }
  } catch (const acmde::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
