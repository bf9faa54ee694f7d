#include "acmde/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "acmde/adaptive.hpp"
#include "acmde/bench.hpp"
#include "acmde/ensemble.hpp"
#include "acmde/error.hpp"
#include "acmde/random.hpp"

namespace acmde {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kVariants{"de",   "sade",  "epsde", "code",
                                         "jade", "shade", "mpede", "edev"};

std::string display_name(std::string_view variant) {
  if (variant == "sade") return "SaDE";
  if (variant == "code") return "CoDE";
  std::string out(variant);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string mode_prefix(CauchyMode mode) {
  switch (mode) {
    case CauchyMode::none: return "";
    case CauchyMode::cm: return "CM-";
    case CauchyMode::acm: return "ACM-";
  }
  return "";
}

std::string default_id(const AlgorithmSpec& spec) {
  std::string base;
  if (spec.variant == "de") {
    base = ClassicEngine(spec.strategy).name();
  } else {
    base = display_name(spec.variant);
  }
  return mode_prefix(spec.cauchy.mode) + base;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sanitize(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '+';
    out += keep ? c : '_';
  }
  return out;
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

CauchyOptions parse_cauchy(const json& j) {
  check_keys(j, {"mode", "threshold", "gamma", "schedule", "ft_init", "ft_fin", "lb", "ub", "p"},
             "cauchy");
  CauchyOptions c;
  c.mode = parse_cauchy_mode(get_or<std::string>(j, "mode", "none"));
  c.cm_threshold = get_or(j, "threshold", c.cm_threshold);
  const double gamma = get_or(j, "gamma", 0.1);
  c.cm_gamma = gamma;
  c.acm.gamma = gamma;
  c.acm.schedule.family = parse_schedule_family(get_or<std::string>(j, "schedule", "SFTD"));
  c.acm.schedule.ft_init = get_or(j, "ft_init", c.acm.schedule.ft_init);
  c.acm.schedule.ft_fin = get_or(j, "ft_fin", c.acm.schedule.ft_fin);
  c.acm.schedule.lb = get_or(j, "lb", c.acm.schedule.lb);
  c.acm.schedule.ub = get_or(j, "ub", c.acm.schedule.ub);
  c.acm.p = get_or(j, "p", c.acm.p);
  return c;
}

json dump_cauchy(const CauchyOptions& c) {
  json j;
  j["mode"] = std::string(to_string(c.mode));
  if (c.mode == CauchyMode::cm) {
    j["threshold"] = c.cm_threshold;
    j["gamma"] = c.cm_gamma;
  } else if (c.mode == CauchyMode::acm) {
    j["schedule"] = std::string(to_string(c.acm.schedule.family));
    j["ft_init"] = c.acm.schedule.ft_init;
    j["ft_fin"] = c.acm.schedule.ft_fin;
    j["lb"] = c.acm.schedule.lb;
    j["ub"] = c.acm.schedule.ub;
    j["p"] = c.acm.p;
    j["gamma"] = c.acm.gamma;
  }
  return j;
}

AlgorithmSpec parse_algorithm(const json& j) {
  check_keys(j,
             {"id", "variant", "strategy", "crossover", "F", "CR", "p", "archive", "np", "cauchy",
              "note"},
             "algorithm");
  AlgorithmSpec a;
  a.variant = get_or<std::string>(j, "variant", "de");
  a.strategy.kind = parse_strategy(get_or<std::string>(j, "strategy", "rand/1"));
  const std::string fallback_cx =
      a.strategy.kind == StrategyKind::current_to_rand1 ? "none" : "bin";
  a.strategy.crossover = parse_crossover(get_or<std::string>(j, "crossover", fallback_cx));
  a.strategy.f = get_or(j, "F", a.strategy.f);
  a.strategy.cr = get_or(j, "CR", a.strategy.cr);
  a.strategy.p = get_or(j, "p", a.strategy.p);
  a.strategy.use_archive = get_or(j, "archive", a.strategy.use_archive);
  a.np = get_or<std::size_t>(j, "np", a.np);
  if (j.contains("cauchy")) a.cauchy = parse_cauchy(j.at("cauchy"));
  a.note = get_or<std::string>(j, "note", "");
  a.id = get_or<std::string>(j, "id", "");
  if (a.id.empty() &&
      std::find(kVariants.begin(), kVariants.end(), a.variant) != kVariants.end()) {
    a.id = default_id(a);
  }
  return a;
}

json dump_algorithm(const AlgorithmSpec& a) {
  json j;
  j["id"] = a.id;
  j["variant"] = a.variant;
  if (a.variant == "de") {
    j["strategy"] = std::string(to_string(a.strategy.kind));
    j["crossover"] = std::string(to_string(a.strategy.crossover));
    j["F"] = a.strategy.f;
    j["CR"] = a.strategy.cr;
    if (a.strategy.kind == StrategyKind::current_to_pbest1) {
      j["p"] = a.strategy.p;
      j["archive"] = a.strategy.use_archive;
    }
  }
  j["np"] = a.np;
  j["cauchy"] = dump_cauchy(a.cauchy);
  if (!a.note.empty()) j["note"] = a.note;
  return j;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write to a sibling temporary and rename so readers never see partial files.
void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::string s = "nfe,fev\n";
  for (const auto& p : trace) s += std::to_string(p.nfe) + "," + num(p.fev) + "\n";
  return s;
}

std::optional<CecLoader> make_loader(const ExperimentConfig& config) {
  if (!config.cec_data_dir) return std::nullopt;
  return CecLoader(*config.cec_data_dir);
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

Budget ExperimentConfig::budget_for(std::size_t d) const {
  Budget b;
  b.nfe_max = nfe_max ? *nfe_max : nfe_per_dimension * d;
  b.g_max = g_max;
  return b;
}

std::vector<ComparisonGroup> ExperimentConfig::effective_comparisons() const {
  if (!comparisons.empty() || algorithms.empty()) return comparisons;
  ComparisonGroup g;
  g.reference = algorithms.front().id;
  for (std::size_t a = 1; a < algorithms.size(); ++a) g.against.push_back(algorithms[a].id);
  return {g};
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("config: no algorithms");
  if (functions.empty()) throw ConfigError("config: no functions");
  if (dimensions.empty()) throw ConfigError("config: no dimensions");
  if (runs < 1) throw ConfigError("config: runs must be >= 1");
  if (workers < 1) throw ConfigError("config: workers must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("config: alpha must lie in (0, 1)");
  if (!nfe_max && nfe_per_dimension == 0) throw ConfigError("config: empty evaluation budget");

  std::set<std::string> ids;
  std::set<std::string> files;
  for (const auto& a : algorithms) {
    if (a.id.empty()) throw ConfigError("config: algorithm without id");
    if (a.id.find_first_of(",\"\n\r") != std::string::npos) {
      throw ConfigError("config: algorithm id '" + a.id + "' contains a comma, quote or newline");
    }
    if (!ids.insert(a.id).second) throw ConfigError("config: duplicate algorithm id '" + a.id + "'");
    if (!files.insert(sanitize(a.id)).second) {
      throw ConfigError("config: algorithm ids collide as file names: '" + a.id + "'");
    }
    const auto engine = make_engine(a);
    if (a.variant == "de") a.strategy.validate();
    a.cauchy.validate();
    if (a.np < engine->min_members()) {
      throw ConfigError(a.id + ": np " + std::to_string(a.np) + " is below the minimum of " +
                        std::to_string(engine->min_members()));
    }
  }

  const auto loader = make_loader(*this);
  std::set<std::string> fn_seen;
  for (const auto& fn : functions) {
    if (!fn_seen.insert(fn).second) throw ConfigError("config: duplicate function '" + fn + "'");
  }
  for (std::size_t d : dimensions) {
    if (d == 0) throw ConfigError("config: dimension must be positive");
    const Budget b = budget_for(d);
    b.validate();
    for (const auto& a : algorithms) {
      if (b.nfe_max && *b.nfe_max < a.np) {
        throw ConfigError(a.id + ": budget of " + std::to_string(*b.nfe_max) +
                          " evaluations is below the population size");
      }
    }
    for (const auto& fn : functions) resolve_objective(fn, d, loader ? &*loader : nullptr);
  }

  for (const auto& g : effective_comparisons()) {
    if (!ids.count(g.reference)) throw ConfigError("comparison: unknown reference '" + g.reference + "'");
    for (const auto& o : g.against) {
      if (!ids.count(o)) throw ConfigError("comparison: unknown algorithm '" + o + "'");
    }
  }
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_keys(j,
             {"name", "algorithms", "functions", "dimensions", "runs", "budget", "seed",
              "trace_interval", "alpha", "workers", "out", "cec_data_dir", "comparisons"},
             "config");
  ExperimentConfig c;
  c.name = get_or<std::string>(j, "name", c.name);
  if (j.contains("algorithms")) {
    for (const auto& a : j.at("algorithms")) c.algorithms.push_back(parse_algorithm(a));
  }
  c.functions = get_or(j, "functions", c.functions);
  c.dimensions = get_or(j, "dimensions", c.dimensions);
  const auto runs = get_or<long long>(j, "runs", 51);
  if (runs < 1) throw ConfigError("config: runs must be >= 1");
  c.runs = static_cast<std::size_t>(runs);
  if (j.contains("budget")) {
    const json& b = j.at("budget");
    check_keys(b, {"nfe_max", "nfe_per_dimension", "g_max"}, "budget");
    if (b.contains("nfe_max")) c.nfe_max = get_or<std::uint64_t>(b, "nfe_max", 0);
    c.nfe_per_dimension = get_or(b, "nfe_per_dimension", c.nfe_per_dimension);
    if (b.contains("g_max")) c.g_max = get_or<std::size_t>(b, "g_max", 0);
  }
  c.seed = get_or(j, "seed", c.seed);
  c.trace_interval = get_or(j, "trace_interval", c.trace_interval);
  c.alpha = get_or(j, "alpha", c.alpha);
  c.workers = get_or(j, "workers", c.workers);
  c.out_dir = get_or<std::string>(j, "out", c.out_dir.string());
  if (j.contains("cec_data_dir")) c.cec_data_dir = get_or<std::string>(j, "cec_data_dir", "");
  if (j.contains("comparisons")) {
    for (const auto& g : j.at("comparisons")) {
      check_keys(g, {"reference", "against"}, "comparison");
      c.comparisons.push_back({get_or<std::string>(g, "reference", ""),
                               get_or<std::vector<std::string>>(g, "against", {})});
    }
  }
  return c;
}

std::string dump_config(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["functions"] = c.functions;
  j["dimensions"] = c.dimensions;
  j["runs"] = c.runs;
  json b;
  if (c.nfe_max) {
    b["nfe_max"] = *c.nfe_max;
  } else {
    b["nfe_per_dimension"] = c.nfe_per_dimension;
  }
  if (c.g_max) b["g_max"] = *c.g_max;
  j["budget"] = b;
  j["seed"] = c.seed;
  j["trace_interval"] = c.trace_interval;
  j["alpha"] = c.alpha;
  j["workers"] = c.workers;
  j["out"] = c.out_dir.string();
  if (c.cec_data_dir) j["cec_data_dir"] = c.cec_data_dir->string();
  j["algorithms"] = json::array();
  for (const auto& a : c.algorithms) j["algorithms"].push_back(dump_algorithm(a));
  if (!c.comparisons.empty()) {
    j["comparisons"] = json::array();
    for (const auto& g : c.comparisons) {
      j["comparisons"].push_back({{"reference", g.reference}, {"against", g.against}});
    }
  }
  return j.dump(2) + "\n";
}

ExperimentConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text);
}

// ---------------------------------------------------------------------------
// Presets

namespace {

AlgorithmSpec classic(StrategyKind kind, CauchyMode mode) {
  AlgorithmSpec a;
  a.variant = "de";
  a.strategy.kind = kind;
  a.strategy.crossover =
      kind == StrategyKind::current_to_rand1 ? CrossoverKind::none : CrossoverKind::binomial;
  a.cauchy.mode = mode;
  a.id = default_id(a);
  return a;
}

AlgorithmSpec advanced(std::string variant, CauchyMode mode) {
  AlgorithmSpec a;
  a.variant = std::move(variant);
  a.cauchy.mode = mode;
  a.note = "np=100 is a harness choice; the original authors' settings are not restated";
  a.id = default_id(a);
  return a;
}

AlgorithmSpec with_schedule(AlgorithmSpec a, ScheduleFamily family, double ft_init, double ft_fin,
                            const std::string& tag) {
  a.cauchy.mode = CauchyMode::acm;
  a.cauchy.acm.schedule.family = family;
  a.cauchy.acm.schedule.ft_init = ft_init;
  a.cauchy.acm.schedule.ft_fin = ft_fin;
  a.id = tag + "-" + default_id(AlgorithmSpec{a.id, a.variant, a.strategy, a.np, {}, ""});
  return a;
}

ExperimentConfig base_preset(std::string name, std::size_t d) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.functions = suite_names();
  c.dimensions = {d};
  c.runs = 5;
  c.seed = 20190801;
  c.workers = 4;
  c.out_dir = "results/" + c.name;
  return c;
}

// ACM, CM and plain versions of each base, grouped with ACM as reference.
void add_triples(ExperimentConfig& c, const std::vector<AlgorithmSpec>& bases) {
  for (const auto& base : bases) {
    ComparisonGroup g;
    for (CauchyMode mode : {CauchyMode::acm, CauchyMode::cm, CauchyMode::none}) {
      AlgorithmSpec a = base;
      a.cauchy.mode = mode;
      a.id = default_id(a);
      c.algorithms.push_back(a);
      if (mode == CauchyMode::acm) {
        g.reference = a.id;
      } else {
        g.against.push_back(a.id);
      }
    }
    c.comparisons.push_back(g);
  }
}

std::vector<AlgorithmSpec> conventional_bases() {
  std::vector<AlgorithmSpec> out;
  for (StrategyKind k : {StrategyKind::rand1, StrategyKind::best1, StrategyKind::current_to_best1,
                         StrategyKind::current_to_rand1, StrategyKind::rand2,
                         StrategyKind::current_to_best2}) {
    out.push_back(classic(k, CauchyMode::none));
  }
  return out;
}

std::vector<AlgorithmSpec> advanced_bases() {
  std::vector<AlgorithmSpec> out;
  for (const char* v : {"sade", "epsde", "code", "shade", "mpede", "edev"}) {
    out.push_back(advanced(v, CauchyMode::none));
  }
  return out;
}

void add_schedules(ExperimentConfig& c, const AlgorithmSpec& base) {
  ComparisonGroup g;
  const struct {
    ScheduleFamily family;
    double init, fin;
    const char* tag;
  } rows[] = {{ScheduleFamily::sftd, 100, 5, "SFTD"},
              {ScheduleFamily::sfti, 5, 100, "SFTI"},
              {ScheduleFamily::lftd, 100, 5, "LFTD"},
              {ScheduleFamily::lfti, 5, 100, "LFTI"}};
  for (const auto& r : rows) {
    AlgorithmSpec a = with_schedule(base, r.family, r.init, r.fin, r.tag);
    c.algorithms.push_back(a);
    if (g.reference.empty()) {
      g.reference = a.id;
    } else {
      g.against.push_back(a.id);
    }
  }
  c.comparisons.push_back(g);
}

void add_initial_thresholds(ExperimentConfig& c, const AlgorithmSpec& base) {
  ComparisonGroup g;
  for (double init : {30.0, 50.0, 80.0, 100.0, 130.0, 150.0, 180.0}) {
    AlgorithmSpec a =
        with_schedule(base, ScheduleFamily::sftd, init, 5.0, "FT" + std::to_string(int(init)));
    c.algorithms.push_back(a);
    if (init == 100.0) {
      g.reference = a.id;
    } else {
      g.against.push_back(a.id);
    }
  }
  c.comparisons.push_back(g);
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"table1", "table2", "table3", "table4", "table5",
          "table6", "table7", "table8", "acceptance"};
}

ExperimentConfig preset(std::string_view name) {
  // Desk scale: D=10 stands in for 30 and D=20 for 50, on the built-in suite.
  if (name == "table1" || name == "table2") {
    auto c = base_preset(std::string(name), name == "table1" ? 10 : 20);
    add_triples(c, conventional_bases());
    return c;
  }
  if (name == "table3" || name == "table4") {
    auto c = base_preset(std::string(name), name == "table3" ? 10 : 20);
    add_triples(c, advanced_bases());
    return c;
  }
  if (name == "table5" || name == "table6") {
    auto c = base_preset(std::string(name), 10);
    add_schedules(c, name == "table5" ? classic(StrategyKind::rand1, CauchyMode::none)
                                      : advanced("edev", CauchyMode::none));
    return c;
  }
  if (name == "table7" || name == "table8") {
    auto c = base_preset(std::string(name), 10);
    add_initial_thresholds(c, name == "table7" ? classic(StrategyKind::rand1, CauchyMode::none)
                                               : advanced("edev", CauchyMode::none));
    return c;
  }
  if (name == "acceptance") {
    ExperimentConfig c;
    c.name = "acceptance";
    c.functions = {"rastrigin"};
    c.dimensions = {30};
    c.runs = 15;
    c.nfe_max = 300000;
    c.seed = 20190801;
    c.workers = 4;
    c.out_dir = "results/acceptance";
    AlgorithmSpec acm = classic(StrategyKind::rand1, CauchyMode::acm);
    AlgorithmSpec plain = classic(StrategyKind::rand1, CauchyMode::none);
    AlgorithmSpec sfti = with_schedule(plain, ScheduleFamily::sfti, 5, 100, "SFTI");
    c.algorithms = {acm, plain, sfti};
    c.comparisons = {{acm.id, {plain.id, sfti.id}}};
    return c;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Running

std::unique_ptr<Engine> make_engine(const AlgorithmSpec& spec) {
  const std::string& v = spec.variant;
  if (v == "de") return std::make_unique<ClassicEngine>(spec.strategy);
  if (v == "sade") return std::make_unique<SadeEngine>();
  if (v == "epsde") return std::make_unique<EpsdeEngine>();
  if (v == "code") return std::make_unique<CodeEngine>();
  if (v == "jade") return std::make_unique<JadeEngine>();
  if (v == "shade") return std::make_unique<ShadeEngine>();
  if (v == "mpede") return EnsembleEngine::mpede();
  if (v == "edev") return EnsembleEngine::edev();
  throw ConfigError("unknown algorithm variant '" + v + "'");
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view algorithm,
                          std::string_view function, std::size_t d, std::size_t run) {
  std::uint64_t s = mix64(master);
  s = mix64(s ^ stable_hash(algorithm));
  s = mix64(s ^ stable_hash(function));
  s = mix64(s ^ static_cast<std::uint64_t>(d));
  s = mix64(s ^ static_cast<std::uint64_t>(run));
  return s;
}

std::string cell_label(std::string_view algorithm, std::string_view function, std::size_t d) {
  return sanitize(algorithm) + "__" + sanitize(function) + "__D" + std::to_string(d);
}

std::string trace_file_name(const RunRecord& r) {
  return "trace_" + cell_label(r.algorithm, r.function, r.dimension) + "__run" +
         std::to_string(r.run) + ".csv";
}

namespace {

RunMatrix matrix_for(const std::vector<RunRecord>& records, std::size_t d) {
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<std::size_t, double>>> by_run;
  for (const auto& r : records) {
    if (r.dimension == d) by_run[{r.algorithm, r.function}].push_back({r.run, r.final_fev});
  }
  RunMatrix m;
  for (auto& [key, values] : by_run) {
    std::sort(values.begin(), values.end());
    auto& out = m[key];
    for (const auto& v : values) out.push_back(v.second);
  }
  return m;
}

std::string tables_csv(const std::vector<TableReport>& tables) {
  std::string out = "D,reference,function,algorithm,mean,std,verdict,p_value,p_method\n";
  for (const auto& t : tables) {
    std::istringstream body(t.table.to_csv());
    std::string line;
    std::getline(body, line);  // header
    while (std::getline(body, line)) {
      out += std::to_string(t.dimension) + "," + t.table.reference + "," + line + "\n";
    }
  }
  return out;
}

}  // namespace

std::string render_tables(const std::vector<TableReport>& tables) {
  std::string out;
  for (const auto& t : tables) {
    out += "D = " + std::to_string(t.dimension) + ", reference " + t.table.reference + "\n";
    out += t.table.to_text();
    out += "\n";
  }
  return out;
}

std::string summary_csv(const ExperimentConfig& config, const std::vector<RunRecord>& records,
                        const std::vector<TableReport>& tables) {
  std::string out = "algorithm,function,D,mean,std,verdict\n";
  for (std::size_t d : config.dimensions) {
    const RunMatrix m = matrix_for(records, d);
    for (const auto& a : config.algorithms) {
      for (const auto& fn : config.functions) {
        const auto it = m.find({a.id, fn});
        if (it == m.end()) continue;
        std::string verdict;
        for (const auto& t : tables) {
          if (t.dimension != d) continue;
          if (t.table.reference == a.id) {
            if (verdict.empty()) verdict = "ref";
            continue;
          }
          const auto& algs = t.table.algorithms;
          const auto pos = std::find(algs.begin(), algs.end(), a.id);
          const auto fpos = std::find(t.table.functions.begin(), t.table.functions.end(), fn);
          if (pos == algs.end() || fpos == t.table.functions.end()) continue;
          const auto& cell =
              t.table.cells[fpos - t.table.functions.begin()][pos - algs.begin()];
          if (cell && cell->comparison) {
            verdict = std::string(symbol(cell->comparison->verdict));
            break;
          }
        }
        out += a.id + "," + fn + "," + std::to_string(d) + "," + num(sample_mean(it->second)) +
               "," + num(sample_stddev(it->second)) + "," + verdict + "\n";
      }
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, bool write) {
  config.validate();

  const auto loader = make_loader(config);
  std::map<std::pair<std::string, std::size_t>, Objective> objectives;
  for (std::size_t d : config.dimensions) {
    for (const auto& fn : config.functions) {
      objectives.emplace(std::make_pair(fn, d),
                         resolve_objective(fn, d, loader ? &*loader : nullptr));
    }
  }

  struct Task {
    const AlgorithmSpec* alg;
    std::string function;
    std::size_t d;
    std::size_t run;
  };
  std::vector<Task> tasks;
  for (const auto& a : config.algorithms) {
    for (const auto& fn : config.functions) {
      for (std::size_t d : config.dimensions) {
        for (std::size_t r = 0; r < config.runs; ++r) tasks.push_back({&a, fn, d, r});
      }
    }
  }

  if (write) fs::create_directories(config.out_dir);

  ExperimentResult result;
  result.records.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      try {
        const Task& t = tasks[k];
        const Objective obj = objectives.at({t.function, t.d});
        RunRecord rec;
        rec.algorithm = t.alg->id;
        rec.function = t.function;
        rec.dimension = t.d;
        rec.run = t.run;
        rec.seed = derive_seed(config.seed, t.alg->id, t.function, t.d, t.run);

        RunSettings settings;
        settings.np = t.alg->np;
        settings.budget = config.budget_for(t.d);
        settings.cauchy = t.alg->cauchy;
        settings.trace_interval = config.trace_interval;
        settings.f_star = obj.f_star;

        auto engine = make_engine(*t.alg);
        Mt64Source rng(rec.seed);
        const auto start = std::chrono::steady_clock::now();
        const RunResult run = optimize(obj.evaluate, obj.bounds, *engine, settings, rng);
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        rec.final_fev = run.final_fev;
        rec.nfe = run.nfe;
        rec.generations = run.generations;
        rec.trace = run.trace;
        rec.monotonicity_violations = run.monotonicity_violations;
        rec.budget_violations = run.budget_violations;
        if (write) write_atomic(config.out_dir / trace_file_name(rec), trace_csv(rec.trace));
        result.records[k] = std::move(rec);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
        return;
      }
    }
  };

  const std::size_t n_workers = std::min(config.workers, std::max<std::size_t>(tasks.size(), 1));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t d : config.dimensions) {
    const RunMatrix m = matrix_for(result.records, d);
    for (const auto& g : config.effective_comparisons()) {
      std::vector<std::string> algs{g.reference};
      algs.insert(algs.end(), g.against.begin(), g.against.end());
      result.tables.push_back(
          {d, build_comparison_table(m, g.reference, algs, config.functions, config.alpha)});
    }
  }
  result.summary_csv = summary_csv(config, result.records, result.tables);

  if (write) {
    std::string runs = "algorithm,function,D,run,seed,final_fev,nfe,generations,trace_file\n";
    std::string timing = "algorithm,function,D,run,wall_seconds\n";
    for (const auto& r : result.records) {
      runs += r.algorithm + "," + r.function + "," + std::to_string(r.dimension) + "," +
              std::to_string(r.run) + "," + std::to_string(r.seed) + "," + num(r.final_fev) + "," +
              std::to_string(r.nfe) + "," + std::to_string(r.generations) + "," +
              trace_file_name(r) + "\n";
      timing += r.algorithm + "," + r.function + "," + std::to_string(r.dimension) + "," +
                std::to_string(r.run) + "," + num(r.wall_seconds) + "\n";
    }
    write_atomic(config.out_dir / "runs.csv", runs);
    write_atomic(config.out_dir / "timing.csv", timing);
    write_atomic(config.out_dir / "summary.csv", result.summary_csv);
    write_atomic(config.out_dir / "table.txt", render_tables(result.tables));
    write_atomic(config.out_dir / "table.csv", tables_csv(result.tables));
    write_atomic(config.out_dir / "config.json", dump_config(config));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Archives

std::vector<RunRecord> load_archive(const fs::path& dir) {
  std::istringstream in(read_file(dir / "runs.csv"));
  std::string line;
  std::getline(in, line);
  if (line.rfind("algorithm,function,D,run,seed,final_fev", 0) != 0) {
    throw std::runtime_error(dir.string() + ": runs.csv has an unexpected header");
  }
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 9) throw std::runtime_error("runs.csv: malformed row: " + line);
    RunRecord r;
    r.algorithm = f[0];
    r.function = f[1];
    r.dimension = std::stoul(f[2]);
    r.run = std::stoul(f[3]);
    r.seed = std::stoull(f[4]);
    r.final_fev = std::stod(f[5]);
    r.nfe = std::stoull(f[6]);
    r.generations = std::stoul(f[7]);
    std::istringstream trace(read_file(dir / f[8]));
    std::string row;
    std::getline(trace, row);
    while (std::getline(trace, row)) {
      if (row.empty()) continue;
      const auto p = split_csv(row);
      if (p.size() != 2) throw std::runtime_error(f[8] + ": malformed row: " + row);
      r.trace.push_back({std::stoull(p[0]), std::stod(p[1])});
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string QuantileCurves::to_csv() const {
  std::string s = "nfe,q25,q50,q75\n";
  for (std::size_t k = 0; k < nfe.size(); ++k) {
    s += std::to_string(nfe[k]) + "," + num(q25[k]) + "," + num(q50[k]) + "," + num(q75[k]) + "\n";
  }
  return s;
}

QuantileCurves trace_quantiles(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("trace_quantiles: no records");
  const auto& grid = records.front().trace;
  for (const auto& r : records) {
    bool aligned = r.trace.size() == grid.size();
    for (std::size_t k = 0; aligned && k < grid.size(); ++k) aligned = r.trace[k].nfe == grid[k].nfe;
    if (!aligned) throw std::invalid_argument("trace_quantiles: traces sampled on different grids");
  }
  QuantileCurves q;
  std::vector<double> column(records.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t r = 0; r < records.size(); ++r) column[r] = records[r].trace[k].fev;
    q.nfe.push_back(grid[k].nfe);
    q.q25.push_back(percentile(column, 0.25));
    q.q50.push_back(percentile(column, 0.50));
    q.q75.push_back(percentile(column, 0.75));
  }
  return q;
}

std::vector<std::string> write_quantiles(const std::vector<RunRecord>& records, const fs::path& dir) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<RunRecord>> cells;
  for (const auto& r : records) {
    const std::string label = cell_label(r.algorithm, r.function, r.dimension);
    if (!cells.count(label)) order.push_back(label);
    cells[label].push_back(r);
  }
  fs::create_directories(dir);
  std::vector<std::string> files;
  for (const auto& label : order) {
    const std::string name = "quantiles_" + label + ".csv";
    write_atomic(dir / name, trace_quantiles(cells[label]).to_csv());
    files.push_back(name);
  }
  return files;
}

std::vector<TableReport> compare_archives(const std::vector<RunRecord>& a,
                                          const std::vector<RunRecord>& b, double alpha) {
  if (a.empty() || b.empty()) throw std::invalid_argument("compare: empty archive");
  std::vector<std::string> algs;
  std::vector<std::string> fns;
  std::set<std::size_t> dims;
  auto note = [](std::vector<std::string>& list, const std::string& v) {
    if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
  };
  std::vector<RunRecord> merged = a;
  for (const auto& r : a) note(algs, r.algorithm);
  const std::vector<std::string> a_ids = algs;
  for (RunRecord r : b) {
    if (std::find(a_ids.begin(), a_ids.end(), r.algorithm) != a_ids.end()) {
      r.algorithm = "B:" + r.algorithm;
    }
    merged.push_back(std::move(r));
  }
  for (const auto& r : merged) {
    note(algs, r.algorithm);
    note(fns, r.function);
    dims.insert(r.dimension);
  }
  std::vector<TableReport> out;
  for (std::size_t d : dims) {
    out.push_back({d, build_comparison_table(matrix_for(merged, d), algs.front(), algs, fns, alpha)});
  }
  return out;
}

}  // namespace acmde
