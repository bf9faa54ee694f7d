#include "acmde/bench.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "acmde/error.hpp"

namespace acmde {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSchwefelOptimum = 420.9687462275036;

double schwefel_offset() {
  static const double c = kSchwefelOptimum * std::sin(std::sqrt(kSchwefelOptimum));
  return c;
}

double schaffer_pair(double x, double y) {
  const double r2 = x * x + y * y;
  const double s = std::sin(std::sqrt(r2));
  const double den = 1.0 + 0.001 * r2;
  return 0.5 + (s * s - 0.5) / (den * den);
}

struct SuiteEntry {
  std::string_view name;
  double (*fn)(std::span<const double>);
  double lower;
  double upper;
  double optimum_coordinate;
  Modality modality;
};

const std::vector<SuiteEntry>& suite() {
  static const std::vector<SuiteEntry> entries{
      {"sphere", sphere, -100.0, 100.0, 0.0, Modality::unimodal},
      {"schwefel_1_2", schwefel_1_2, -100.0, 100.0, 0.0, Modality::unimodal},
      {"bent_cigar", bent_cigar, -100.0, 100.0, 0.0, Modality::unimodal},
      {"zakharov", zakharov, -5.0, 10.0, 0.0, Modality::unimodal},
      {"rosenbrock", rosenbrock, -30.0, 30.0, 1.0, Modality::multimodal},
      {"rastrigin", rastrigin, -5.12, 5.12, 0.0, Modality::multimodal},
      {"ackley", ackley, -32.768, 32.768, 0.0, Modality::multimodal},
      {"griewank", griewank, -600.0, 600.0, 0.0, Modality::multimodal},
      {"schaffer_f6", expanded_schaffer_f6, -100.0, 100.0, 0.0, Modality::multimodal},
      {"levy", levy, -10.0, 10.0, 1.0, Modality::multimodal},
      {"schwefel_2_26", schwefel_2_26, -500.0, 500.0, kSchwefelOptimum, Modality::multimodal},
  };
  return entries;
}

const SuiteEntry* find_entry(std::string_view name) {
  for (const auto& e : suite()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::vector<double> read_numbers(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) values.push_back(v);
  return values;
}

}  // namespace

double fev(double f_star, double f_best) { return std::abs(f_star - f_best); }

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    const double a = x[j + 1] - x[j] * x[j];
    const double b = x[j] - 1.0;
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double schwefel_1_2(std::span<const double> x) {
  double s = 0.0;
  double prefix = 0.0;
  for (double v : x) {
    prefix += v;
    s += prefix * prefix;
  }
  return s;
}

double bent_cigar(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t j = 1; j < x.size(); ++j) s += x[j] * x[j];
  return x[0] * x[0] + 1e6 * s;
}

double zakharov(std::span<const double> x) {
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    s1 += x[j] * x[j];
    s2 += 0.5 * static_cast<double>(j + 1) * x[j];
  }
  return s1 + s2 * s2 + s2 * s2 * s2 * s2;
}

double rastrigin(std::span<const double> x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * kPi * v);
  return s;
}

double ackley(std::span<const double> x) {
  const double d = static_cast<double>(x.size());
  double sq = 0.0;
  double cs = 0.0;
  for (double v : x) {
    sq += v * v;
    cs += std::cos(2.0 * kPi * v);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 + std::numbers::e;
}

double griewank(std::span<const double> x) {
  double s = 0.0;
  double p = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    s += x[j] * x[j];
    p *= std::cos(x[j] / std::sqrt(static_cast<double>(j + 1)));
  }
  return 1.0 + s / 4000.0 - p;
}

double expanded_schaffer_f6(std::span<const double> x) {
  const std::size_t d = x.size();
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) s += schaffer_pair(x[j], x[(j + 1) % d]);
  return s;
}

double levy(std::span<const double> x) {
  const std::size_t d = x.size();
  auto w = [&](std::size_t j) { return 1.0 + (x[j] - 1.0) / 4.0; };
  const double s0 = std::sin(kPi * w(0));
  double s = s0 * s0;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    const double wj = w(j);
    const double t = std::sin(kPi * wj + 1.0);
    s += (wj - 1.0) * (wj - 1.0) * (1.0 + 10.0 * t * t);
  }
  const double wd = w(d - 1);
  const double t = std::sin(2.0 * kPi * wd);
  return s + (wd - 1.0) * (wd - 1.0) * (1.0 + t * t);
}

double schwefel_2_26(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += schwefel_offset() - v * std::sin(std::sqrt(std::abs(v)));
  return s;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& e : suite()) names.emplace_back(e.name);
  return names;
}

Objective make_objective(std::string_view name, std::size_t d) {
  const SuiteEntry* e = find_entry(name);
  if (!e) throw ConfigError("unknown function '" + std::string(name) + "'");
  if (d == 0) throw ConfigError("function dimension must be positive");
  Objective obj{std::string(e->name), Bounds::uniform(d, e->lower, e->upper),
                [fn = e->fn, d](std::span<const double> x) {
                  if (x.size() != d) throw std::invalid_argument("objective: dimension mismatch");
                  return fn(x);
                },
                0.0, Vector(d, e->optimum_coordinate), e->modality};
  return obj;
}

double evaluate_suite_function(std::string_view name, std::span<const double> x) {
  const SuiteEntry* e = find_entry(name);
  if (!e) throw ConfigError("unknown function '" + std::string(name) + "'");
  if (x.empty()) throw std::invalid_argument("evaluate_suite_function: empty point");
  return e->fn(x);
}

// ---------------------------------------------------------------------------

namespace {

struct CecShape {
  int id;
  double (*fn)(std::span<const double>);
  double scale;   // applied to (x - o) before rotation
  double offset;  // added after rotation
  Modality modality;
};

const std::vector<CecShape>& cec_shapes() {
  static const std::vector<CecShape> shapes{
      {1, bent_cigar, 1.0, 0.0, Modality::unimodal},
      {3, zakharov, 1.0, 0.0, Modality::unimodal},
      {4, rosenbrock, 2.048 / 100.0, 1.0, Modality::multimodal},
      {5, rastrigin, 5.12 / 100.0, 0.0, Modality::multimodal},
      {6, expanded_schaffer_f6, 1.0, 0.0, Modality::multimodal},
      {9, levy, 1.0, 1.0, Modality::multimodal},
      {10, schwefel_2_26, 10.0, kSchwefelOptimum, Modality::multimodal},
  };
  return shapes;
}

std::filesystem::path shift_file(const std::filesystem::path& dir, int id) {
  return dir / ("shift_data_" + std::to_string(id) + ".txt");
}

std::filesystem::path matrix_file(const std::filesystem::path& dir, int id, std::size_t d) {
  return dir / ("M_" + std::to_string(id) + "_D" + std::to_string(d) + ".txt");
}

}  // namespace

bool CecLoader::available() const {
  std::error_code ec;
  return std::filesystem::is_directory(dir_, ec);
}

std::vector<int> CecLoader::ids(std::size_t d) const {
  std::vector<int> out;
  if (!available()) return out;
  for (const auto& s : cec_shapes()) {
    if (std::filesystem::exists(shift_file(dir_, s.id)) &&
        std::filesystem::exists(matrix_file(dir_, s.id, d))) {
      out.push_back(s.id);
    }
  }
  return out;
}

std::optional<Objective> CecLoader::load(int id, std::size_t d) const {
  if (!available()) return std::nullopt;
  const CecShape* shape = nullptr;
  for (const auto& s : cec_shapes()) {
    if (s.id == id) shape = &s;
  }
  if (!shape) return std::nullopt;
  const auto shift_path = shift_file(dir_, id);
  const auto matrix_path = matrix_file(dir_, id, d);
  if (!std::filesystem::exists(shift_path) || !std::filesystem::exists(matrix_path)) {
    return std::nullopt;
  }
  Vector shift = read_numbers(shift_path);
  Vector matrix = read_numbers(matrix_path);
  if (shift.size() < d || matrix.size() < d * d) {
    throw ConfigError("cec data for id " + std::to_string(id) + " is too short");
  }
  shift.resize(d);
  matrix.resize(d * d);

  const double f_star = 100.0 * id;
  auto fn = [shape = *shape, shift, matrix, d, f_star](std::span<const double> x) {
    if (x.size() != d) throw std::invalid_argument("objective: dimension mismatch");
    Vector y(d);
    for (std::size_t j = 0; j < d; ++j) y[j] = shape.scale * (x[j] - shift[j]);
    Vector z(d, shape.offset);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) z[r] += matrix[r * d + c] * y[c];
    }
    return shape.fn(z) + f_star;
  };
  return Objective{"cec" + std::to_string(id), Bounds::uniform(d, -100.0, 100.0), fn, f_star,
                   shift, shape->modality};
}

Objective resolve_objective(std::string_view name, std::size_t d, const CecLoader* loader) {
  if (name.starts_with("cec")) {
    if (!loader) throw ConfigError("function '" + std::string(name) + "' needs a CEC data dir");
    int id = 0;
    std::istringstream(std::string(name.substr(3))) >> id;
    auto obj = loader->load(id, d);
    if (!obj) throw ConfigError("no CEC data for '" + std::string(name) + "'");
    return *obj;
  }
  return make_objective(name, d);
}

}  // namespace acmde
