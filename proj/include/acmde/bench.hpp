#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acmde/core.hpp"

namespace acmde {

enum class Modality { unimodal, multimodal };

struct Objective {
  std::string name;
  Bounds bounds;
  ObjectiveFn evaluate;
  double f_star = 0.0;
  std::optional<Vector> x_star;
  Modality modality = Modality::multimodal;

  std::size_t dimension() const { return bounds.dimension(); }
};

/// Function error value |f_star - f_best|.
double fev(double f_star, double f_best);

// Raw definitions, minimum 0.
double sphere(std::span<const double> x);
double rosenbrock(std::span<const double> x);
double schwefel_1_2(std::span<const double> x);
double bent_cigar(std::span<const double> x);
double zakharov(std::span<const double> x);
double rastrigin(std::span<const double> x);
double ackley(std::span<const double> x);
double griewank(std::span<const double> x);
double expanded_schaffer_f6(std::span<const double> x);
double levy(std::span<const double> x);
double schwefel_2_26(std::span<const double> x);

/// Names of the built-in functions, unimodal first.
std::vector<std::string> suite_names();

/// Built-in function at dimension d. Throws ConfigError for unknown names.
Objective make_objective(std::string_view name, std::size_t d);

/// Evaluates a built-in by name. Throws ConfigError for unknown names and
/// std::invalid_argument when x.size() == 0.
double evaluate_suite_function(std::string_view name, std::span<const double> x);

/// Shifted and rotated functions built from CEC-2017 style data files:
/// `shift_data_<id>.txt` (whitespace separated, first d values used) and
/// `M_<id>_D<d>.txt` (d x d row-major). Supported ids map onto the built-ins
/// (1 bent cigar, 3 zakharov, 4 rosenbrock, 5 rastrigin, 6 expanded schaffer,
/// 9 levy, 10 schwefel); f_star = 100 * id.
class CecLoader {
 public:
  explicit CecLoader(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// False when the directory does not exist; every lookup then misses.
  bool available() const;
  /// Ids from the supported set whose files exist for dimension d.
  std::vector<int> ids(std::size_t d) const;
  /// Name form "cec<id>", e.g. "cec5". nullopt when files are missing.
  std::optional<Objective> load(int id, std::size_t d) const;

 private:
  std::filesystem::path dir_;
};

/// Resolves a built-in name or, given a loader, a "cec<id>" name.
Objective resolve_objective(std::string_view name, std::size_t d,
                            const CecLoader* loader = nullptr);

}  // namespace acmde
