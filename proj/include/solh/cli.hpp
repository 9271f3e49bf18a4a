#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace solh {

/// Bad command line or configuration value (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A property check ran and failed (exit code 4).
class PropertyFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExitCode : int { ok = 0, internal = 1, usage = 2, precision = 3, property = 4 };

enum class OutputFormat { json, csv };

/// Resolved session settings. `sources` records where each value came from
/// ("flag", "env" or "default") so reports can state it.
struct SessionConfig {
  std::size_t tower_depth = 16;
  double mean_T = 1e4;
  double grid_density = 64.0;
  double threshold_factor = 5.0;
  OutputFormat format = OutputFormat::json;
  std::map<std::string, std::string> sources;
};

/// Values given on the command line; empty means "not given".
struct ConfigFlags {
  std::optional<std::size_t> tower_depth;
  std::optional<double> mean_T;
  std::optional<double> grid_density;
  std::optional<double> threshold_factor;
  std::optional<std::string> format;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// The process environment.
EnvLookup process_env();

/// flags > SOLH_* environment > defaults. Throws UsageError on invalid values.
SessionConfig resolve_config(const ConfigFlags& flags, const EnvLookup& env);

struct AnalyzeOptions {
  /// Recover the spectrum from samples of the base-leaf function instead of
  /// reading it off symbolically.
  bool blackbox = false;
  std::uint64_t max_den = 12;
  std::uint64_t max_abs = 6;
};

std::string cmd_analyze(const std::string& spec_file, const SessionConfig& config, const AnalyzeOptions& options = {});
/// `n` empty means every entry.
std::string cmd_synth(const std::string& spectrum_file, std::optional<long long> n, const SessionConfig& config);

struct VerifyResult {
  std::string report;
  bool all_pass = true;
};
VerifyResult cmd_verify(const std::string& spec_file, const SessionConfig& config);

/// `n_list` empty means 0..number of terms.
std::string cmd_approx(const std::string& spec_file, const std::vector<long long>& n_list, const SessionConfig& config);

/// Full front end: parses `args` (without the program name), runs the
/// command, writes the report to `out` or the --out file and diagnostics to
/// `err`. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const EnvLookup& env = process_env());

}  // namespace solh
