#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ldspectra/workflows.hpp"

namespace ldspectra {

namespace {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// The INI reader keeps trailing comments and TOML quotes; strip both.
std::string clean_value(std::string v) {
  if (!v.empty() && (v.front() == '"' || v.front() == '\'')) {
    const char q = v.front();
    const auto close = v.find(q, 1);
    if (close == std::string::npos) throw ConfigError("unterminated string: " + v);
    return v.substr(1, close - 1);
  }
  for (const char* marker : {" #", "\t#", " ;", "\t;"}) {
    const auto pos = v.find(marker);
    if (pos != std::string::npos) v.erase(pos);
  }
  return trim(v);
}

double to_double(std::string_view text, const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key + ": expected a number, got '" + t + "'");
  }
  return v;
}

int to_int(std::string_view text, const std::string& key) {
  const std::string t = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key + ": expected an integer, got '" + t + "'");
  }
  return v;
}

bool to_bool(const std::string& t, const std::string& key) {
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + t + "'");
}

OutputFormat to_format(const std::string& t) {
  if (t == "csv") return OutputFormat::Csv;
  if (t == "json") return OutputFormat::Json;
  throw ConfigError("format must be csv or json, got '" + t + "'");
}

SolutionPath to_path(const std::string& t) {
  if (t == "matrix") return SolutionPath::Matrix;
  if (t == "linearized") return SolutionPath::MatrixLinearized;
  if (t == "analytic") return SolutionPath::Analytic;
  throw ConfigError("evolve.path must be matrix, linearized or analytic, got '" + t + "'");
}

const char* path_name(SolutionPath p) {
  switch (p) {
    case SolutionPath::Matrix: return "matrix";
    case SolutionPath::MatrixLinearized: return "linearized";
    case SolutionPath::Analytic: return "analytic";
  }
  return "matrix";
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"model", {"nu", "delta", "K", "epsilon", "omega_L"}},
      {"physical", {"M", "nu", "k_L", "lambda", "E_L", "omega_0", "omega_L"}},
      {"truncation", {"n_max", "n_guard"}},
      {"spectrum", {"n_levels"}},
      {"sweep", {"epsilon", "K"}},
      {"evolve", {"t_end", "steps", "tol", "order", "amps", "path"}},
      {"validate", {"scaling_levels", "scaling_epsilons", "dynamics", "corrupt_hamiltonian"}},
      {"output", {"dir", "format"}},
  };
  return keys;
}

void check_config(const RunConfig& c) {
  c.params.validate();
  if (c.n_max && *c.n_max < 1) throw ConfigError("n_max must be >= 1");
  if (c.n_guard && *c.n_guard < 0) throw ConfigError("n_guard must be >= 0");
  if (c.n_max && c.n_guard && *c.n_guard >= *c.n_max) throw ConfigError("n_guard must be < n_max");
  if (c.n_levels < 0) throw ConfigError("n_levels must be >= 0");
  for (double e : c.sweep_epsilon) {
    if (!std::isfinite(e) || e < 0.0) throw ConfigError("sweep epsilon values must be finite and >= 0");
  }
  for (double k : c.sweep_K) {
    if (!std::isfinite(k) || k < 0.0) throw ConfigError("sweep K values must be finite and >= 0");
  }
  if (c.t_end && !(*c.t_end >= 0.0)) throw ConfigError("t_end must be >= 0");
  if (c.steps < 1) throw ConfigError("steps must be >= 1");
  if (!(c.tol >= 1e-12)) throw ConfigError("tol must be >= 1e-12");
  if (c.order < 0 || c.order > 2) throw ConfigError("order must be 0, 1 or 2");
  if (c.scaling_levels < 0) throw ConfigError("scaling_levels must be >= 0");
  if (c.scaling_epsilons.size() < 2) throw ConfigError("scaling_epsilons needs at least two values");
  for (double e : c.scaling_epsilons) {
    if (!(e > 0.0)) throw ConfigError("scaling_epsilons must be > 0");
  }
}

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".ldspectra_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

}  // namespace

FockTruncation RunConfig::truncation(int default_n_max) const {
  const int nm = n_max.value_or(default_n_max);
  const int ng = n_guard.value_or(std::min(kDefaultGuard, nm - 1));
  return FockTruncation(nm, ng);
}

double RunConfig::resolved_t_end() const { return t_end.value_or(20.0 * std::numbers::pi / params.nu); }

nlohmann::json RunConfig::to_json() const {
  using nlohmann::json;
  json j;
  j["model"] = {{"nu", params.nu},
                {"delta", params.delta},
                {"K", params.K},
                {"epsilon", params.epsilon},
                {"omega_L", params.laser_frequency()}};
  if (physical) {
    j["physical"] = {{"M", physical->M},           {"nu", physical->nu},
                     {"k_L", physical->k_L},       {"lambda", physical->lambda_coupling},
                     {"E_L", physical->E_L},       {"omega_0", physical->omega_0},
                     {"omega_L", physical->omega_L}};
  }
  j["truncation"] = {{"n_max", n_max ? json(*n_max) : json(nullptr)},
                     {"n_guard", n_guard ? json(*n_guard) : json(nullptr)}};
  j["spectrum"] = {{"n_levels", n_levels}};
  j["sweep"] = {{"epsilon", sweep_epsilon}, {"K", sweep_K}};
  j["evolve"] = {{"t_end", resolved_t_end()},
                 {"steps", steps},
                 {"tol", tol},
                 {"order", order},
                 {"path", path_name(path)},
                 {"amps", amps ? json(amps->string()) : json(nullptr)}};
  j["validate"] = {{"scaling_levels", scaling_levels},
                   {"scaling_epsilons", scaling_epsilons},
                   {"dynamics", dynamics},
                   {"corrupt_hamiltonian", corrupt_hamiltonian}};
  j["output"] = {{"dir", out_dir.string()}, {"format", format == OutputFormat::Csv ? "csv" : "json"}};
  return j;
}

std::vector<double> parse_list(std::string_view text) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw ConfigError("unbalanced brackets in list: " + t);
    t = t.substr(1, t.size() - 2);
  }
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(tok, "list"));
  return out;
}

RunConfig parse_config(std::string_view text, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }

  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' must live in a [section]");
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, _] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown key " + section + "." + key);
    }
  }
  if (tree.count("model") && tree.count("physical")) {
    throw ConfigError("give either [model] or [physical], not both");
  }

  auto get = [&](const std::string& key) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'))) return clean_value(*v);
    return std::nullopt;
  };
  auto num = [&](const std::string& key, double& dst) {
    if (auto v = get(key)) dst = to_double(*v, key);
  };

  RunConfig c;
  if (tree.count("physical")) {
    PhysicalInputs in;
    num("physical.M", in.M);
    num("physical.nu", in.nu);
    num("physical.k_L", in.k_L);
    num("physical.lambda", in.lambda_coupling);
    num("physical.E_L", in.E_L);
    num("physical.omega_0", in.omega_0);
    num("physical.omega_L", in.omega_L);
    c.physical = in;
    c.params = ModelParams::from_physical(in);
  } else {
    num("model.nu", c.params.nu);
    num("model.delta", c.params.delta);
    num("model.K", c.params.K);
    num("model.epsilon", c.params.epsilon);
    if (auto v = get("model.omega_L")) c.params.omega_L = to_double(*v, "model.omega_L");
  }
  if (auto v = get("truncation.n_max")) c.n_max = to_int(*v, "truncation.n_max");
  if (auto v = get("truncation.n_guard")) c.n_guard = to_int(*v, "truncation.n_guard");
  if (auto v = get("spectrum.n_levels")) c.n_levels = to_int(*v, "spectrum.n_levels");
  if (auto v = get("sweep.epsilon")) c.sweep_epsilon = parse_list(*v);
  if (auto v = get("sweep.K")) c.sweep_K = parse_list(*v);
  if (auto v = get("evolve.t_end")) c.t_end = to_double(*v, "evolve.t_end");
  if (auto v = get("evolve.steps")) c.steps = to_int(*v, "evolve.steps");
  num("evolve.tol", c.tol);
  if (auto v = get("evolve.order")) c.order = to_int(*v, "evolve.order");
  if (auto v = get("evolve.path")) c.path = to_path(*v);
  if (auto v = get("evolve.amps")) {
    fs::path a(*v);
    c.amps = a.is_relative() && !base_dir.empty() ? base_dir / a : a;
  }
  if (auto v = get("validate.scaling_levels")) c.scaling_levels = to_int(*v, "validate.scaling_levels");
  if (auto v = get("validate.scaling_epsilons")) c.scaling_epsilons = parse_list(*v);
  if (auto v = get("validate.dynamics")) c.dynamics = to_bool(*v, "validate.dynamics");
  if (auto v = get("validate.corrupt_hamiltonian")) {
    c.corrupt_hamiltonian = to_bool(*v, "validate.corrupt_hamiltonian");
  }
  if (auto v = get("output.dir")) {
    fs::path d(*v);
    c.out_dir = d.is_relative() && !base_dir.empty() ? base_dir / d : d;
  }
  if (auto v = get("output.format")) c.format = to_format(*v);
  check_config(c);
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("LDSPECTRA_THREADS"); env && *env) {
    const int n = to_int(env, "LDSPECTRA_THREADS");
    if (n < 1) throw ConfigError("LDSPECTRA_THREADS must be >= 1");
    return unsigned(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

RunConfig resolve_config(const ConfigOverrides& ov) {
  RunConfig c = ov.config ? load_config(*ov.config) : RunConfig{};
  if (ov.nu) c.params.nu = *ov.nu;
  if (ov.K) c.params.K = *ov.K;
  if (ov.delta) c.params.delta = *ov.delta;
  if (ov.epsilon) c.params.epsilon = *ov.epsilon;
  if (ov.n_max) c.n_max = *ov.n_max;
  if (ov.n_guard) c.n_guard = *ov.n_guard;
  if (ov.out) c.out_dir = *ov.out;
  if (ov.format) c.format = to_format(*ov.format);
  if (ov.t_end) c.t_end = *ov.t_end;
  if (ov.tol) c.tol = *ov.tol;
  if (ov.steps) c.steps = *ov.steps;
  if (ov.order) c.order = *ov.order;
  if (ov.amps) c.amps = *ov.amps;
  if (ov.sweep_epsilon) c.sweep_epsilon = parse_list(*ov.sweep_epsilon);
  if (ov.sweep_K) c.sweep_K = parse_list(*ov.sweep_K);
  if (ov.corrupt_hamiltonian) c.corrupt_hamiltonian = true;
  check_config(c);
  if (c.amps && !fs::is_regular_file(*c.amps)) throw ConfigError("amplitude file not found: " + c.amps->string());
  ensure_writable(c.out_dir);
  c.threads = sweep_threads();
  return c;
}

AmplitudeSet read_amplitudes(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read amplitude file " + path.string());
  AmplitudeSet amps;
  std::string line;
  int row = 0;
  while (std::getline(f, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> cols;
    std::istringstream ls(t);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(trim(c));
    if (cols.size() != 4) throw ConfigError(path.string() + ":" + std::to_string(row) + ": expected n,s,Re,Im");
    if (cols[0] == "n") continue;  // header
    const std::string where = path.string() + ":" + std::to_string(row);
    const int n = to_int(cols[0], where + " n");
    const int s = to_int(cols[1], where + " s");
    if (n < 0) throw ConfigError(where + ": n must be >= 0");
    if (s != -1 && s != 1) throw ConfigError(where + ": s must be -1 or +1");
    const Complex z(to_double(cols[2], where + " Re"), to_double(cols[3], where + " Im"));
    if (!amps.emplace(BasisIndex{n, s}, z).second) throw ConfigError(where + ": duplicate (n, s)");
  }
  double norm2 = 0.0;
  for (const auto& [_, z] : amps) norm2 += std::norm(z);
  if (!(norm2 > 0.0)) throw ConfigError(path.string() + ": amplitudes are all zero");
  return amps;
}

}  // namespace ldspectra
