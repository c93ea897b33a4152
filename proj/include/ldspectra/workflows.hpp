#pragma once

// Run configuration and the command-line workflows. Each cmd_* writes its
// tables and one JSON report into the output directory and returns the
// process exit status.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ldspectra/model.hpp"
#include "ldspectra/oracle.hpp"

namespace ldspectra {

enum class OutputFormat { Csv, Json };

inline constexpr int kSpectrumNMax = 120;
inline constexpr int kEvolveNMax = 40;

struct RunConfig {
  ModelParams params{.nu = 1.0, .delta = 0.0, .K = 0.25, .epsilon = 0.05, .omega_L = std::nullopt};
  std::optional<PhysicalInputs> physical;  // set when params were derived from it

  std::optional<int> n_max;    // workflow default when unset
  std::optional<int> n_guard;  // min(10, n_max - 1) when unset
  int n_levels = 20;
  std::vector<double> sweep_epsilon;
  std::vector<double> sweep_K;

  std::optional<double> t_end;  // 10 trap periods when unset
  int steps = 200;
  double tol = 1e-10;
  int order = 1;
  SolutionPath path = SolutionPath::Matrix;
  std::optional<std::filesystem::path> amps;  // default |0,-> when unset

  int scaling_levels = 1;
  std::vector<double> scaling_epsilons{0.01, 0.02, 0.04};
  bool dynamics = false;
  bool corrupt_hamiltonian = false;  // test hook for `validate`

  std::filesystem::path out_dir = ".";
  OutputFormat format = OutputFormat::Csv;
  unsigned threads = 1;  // not part of the embedded config

  FockTruncation truncation(int default_n_max) const;
  double resolved_t_end() const;
  /// Full resolved configuration as embedded in every output file.
  nlohmann::json to_json() const;
};

/// Command-line values; set fields win over the config file.
struct ConfigOverrides {
  std::optional<std::filesystem::path> config;
  std::optional<double> nu, K, delta, epsilon;
  std::optional<int> n_max, n_guard;
  std::optional<std::filesystem::path> out;
  std::optional<std::string> format;
  std::optional<double> t_end, tol;
  std::optional<int> steps, order;
  std::optional<std::filesystem::path> amps;
  std::optional<std::string> sweep_epsilon, sweep_K;
  bool corrupt_hamiltonian = false;
};

/// Parses the key/value text. `base_dir` resolves relative paths.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Loads the file (if any), applies the overrides and validates. Throws
/// ConfigError.
RunConfig resolve_config(const ConfigOverrides& ov);

/// Comma or whitespace separated doubles, optional surrounding brackets.
std::vector<double> parse_list(std::string_view text);

/// Worker count for sweeps: LDSPECTRA_THREADS if set (>= 1), else the
/// hardware concurrency.
unsigned sweep_threads();

/// CSV of n,s,Re,Im with an optional header row and '#' comments.
AmplitudeSet read_amplitudes(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double x);

int cmd_spectrum(const RunConfig& cfg, std::ostream& log);
int cmd_regimes(const RunConfig& cfg, std::ostream& log);
int cmd_evolve(const RunConfig& cfg, std::ostream& log);
int cmd_jc(const RunConfig& cfg, std::ostream& log);
int cmd_validate(const RunConfig& cfg, std::ostream& log);

}  // namespace ldspectra
