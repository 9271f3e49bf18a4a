#include "solh/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "solh/errors.hpp"
#include "solh/fourier.hpp"
#include "solh/io.hpp"
#include "solh/meanval.hpp"

namespace solh {

namespace {

constexpr std::uint64_t kSampleSeed = 0x736f6c68ULL;
constexpr std::size_t kInvarianceSamples = 200;
constexpr std::size_t kMeanSamples = 20;
constexpr std::size_t kLeafSamples = 100;
constexpr double kInvarianceTol = 1e-10;
constexpr double kExactTol = 1e-12;
constexpr double kNumericParsevalTol = 1e-2;
constexpr std::size_t kMaxDepth = 1024;

const char* format_name(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

OutputFormat parse_format(const std::string& s, const std::string& where) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw UsageError(where + ": format must be json or csv, got \"" + s + "\"");
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw UsageError(where + ": not a number: \"" + s + "\"");
  return v;
}

std::size_t parse_size(const std::string& s, const std::string& where) {
  std::size_t v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw UsageError(where + ": not a non-negative integer: \"" + s + "\"");
  return v;
}

// Shortest representation that round-trips.
std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Json config_json(const SessionConfig& c) {
  Json j;
  j["tower_depth"] = c.tower_depth;
  j["mean_T"] = c.mean_T;
  j["grid_density"] = c.grid_density;
  j["threshold_factor"] = c.threshold_factor;
  j["format"] = format_name(c.format);
  Json src = Json::object();
  for (const auto& [k, v] : c.sources) src[k] = v;
  j["sources"] = std::move(src);
  return j;
}

Json report_head(const std::string& command, const SessionConfig& c) {
  Json j;
  j["tool"] = "solh";
  j["command"] = command;
  j["config"] = config_json(c);
  return j;
}

std::string csv_head(const std::string& command, const SessionConfig& c) {
  auto src = [&](const std::string& k) {
    auto it = c.sources.find(k);
    return it == c.sources.end() ? std::string("default") : it->second;
  };
  std::ostringstream os;
  os << "# solh " << command << " tower_depth=" << c.tower_depth << " (" << src("tower_depth") << ")"
     << " mean_T=" << fmt(c.mean_T) << " (" << src("mean_T") << ")"
     << " grid_density=" << fmt(c.grid_density) << " (" << src("grid_density") << ")"
     << " threshold_factor=" << fmt(c.threshold_factor) << " (" << src("threshold_factor") << ")"
     << " format=" << format_name(c.format) << " (" << src("format") << ")\n";
  return os.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

GridPolicy grid_policy(const SessionConfig& c) {
  GridPolicy p;
  p.points_per_period = c.grid_density;
  return p;
}

// Every term's cylinder modulus must be resolvable at the configured depth.
void check_depth(const ProductPoly& poly, const SessionConfig& c) {
  const ModulusTower tower = ModulusTower::lcm_tower(c.tower_depth);
  for (const auto& t : poly.terms()) require_resolvable(tower, lcm(t.chr.lambda.den(), t.chr.rho.b()));
}

FunctionSpec load_spec(const std::string& path, const SessionConfig& c) {
  FunctionSpec spec = function_spec_from_json(read_json_file(path));
  check_depth(spec.poly, c);
  return spec;
}

std::vector<std::int64_t> invariance_shifts() {
  std::vector<std::int64_t> g;
  for (std::int64_t k = -5; k <= 5; ++k) g.push_back(k);
  return g;
}

double invariance_residual(const ProductPoly& poly, const SessionConfig& c) {
  std::mt19937_64 rng(kSampleSeed);
  const auto samples = random_samples(kInvarianceSamples, -50.0, 50.0, ModulusTower::lcm_tower(c.tower_depth), rng);
  return check_invariance(poly, invariance_shifts(), samples);
}

std::string first_non_descending(const ProductPoly& poly) {
  for (const auto& t : poly.terms()) {
    if (!descends(t.chr)) return "(" + t.chr.lambda.str() + ", " + t.chr.rho.str() + ")";
  }
  return {};
}

Json parseval_json(const ParsevalReport& r) {
  Json j;
  j["sum_sq"] = r.sum_sq;
  j["mean_sq"] = r.mean_sq;
  j["gap"] = r.gap;
  return j;
}

}  // namespace

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

SessionConfig resolve_config(const ConfigFlags& flags, const EnvLookup& env) {
  SessionConfig c;
  auto pick = [&](const std::string& key, const std::string& env_name, const auto& flag, auto parse, auto& slot) {
    if (flag) {
      slot = *flag;
      c.sources[key] = "flag";
    } else if (auto v = env(env_name)) {
      slot = parse(*v, env_name);
      c.sources[key] = "env";
    } else {
      c.sources[key] = "default";
    }
  };
  pick("tower_depth", "SOLH_DEPTH", flags.tower_depth, parse_size, c.tower_depth);
  pick("mean_T", "SOLH_MEAN_T", flags.mean_T, parse_double, c.mean_T);
  pick("grid_density", "SOLH_GRID", flags.grid_density, parse_double, c.grid_density);
  pick("threshold_factor", "SOLH_THRESHOLD", flags.threshold_factor, parse_double, c.threshold_factor);
  std::optional<OutputFormat> fmt_flag;
  if (flags.format) fmt_flag = parse_format(*flags.format, "--format");
  pick("format", "SOLH_FORMAT", fmt_flag, parse_format, c.format);

  if (c.tower_depth < 1 || c.tower_depth > kMaxDepth) {
    throw UsageError("tower depth must be in [1, " + std::to_string(kMaxDepth) + "]");
  }
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(name) + " must be positive and finite");
  };
  positive(c.mean_T, "mean_T");
  positive(c.grid_density, "grid density");
  positive(c.threshold_factor, "threshold factor");
  return c;
}

std::string cmd_analyze(const std::string& spec_file, const SessionConfig& config, const AnalyzeOptions& options) {
  const FunctionSpec spec = load_spec(spec_file, config);
  const double residual = invariance_residual(spec.poly, config);
  if (!spec.poly.all_descend()) {
    throw PropertyFailure("function is not Z-invariant: character " + first_non_descending(spec.poly) +
                          " does not descend (invariance residual " + fmt(residual) + ")");
  }
  const SolenoidPoly phi = spec.solenoid();
  const ParsevalReport parseval = parseval_check(phi);

  Spectrum spec_out;
  std::optional<BlackBoxSpectrum> detection;
  if (options.blackbox) {
    BlackBoxOptions bb;
    bb.max_den = options.max_den;
    bb.max_abs = options.max_abs;
    bb.horizon = config.mean_T;
    bb.threshold_factor = config.threshold_factor;
    const TrigPoly leaf = leaf_restrict(phi, embed_int(0, ModulusTower::lcm_tower(config.tower_depth))).poly;
    detection = spectrum_blackbox([&](double x) { return leaf(x); }, bb);
    spec_out = detection->spectrum;
  } else {
    spec_out = spectrum(phi);
  }

  if (config.format == OutputFormat::csv) {
    std::ostringstream os;
    os << csv_head("analyze", config);
    os << "# parseval_gap=" << fmt(parseval.gap) << " invariance_residual=" << fmt(residual) << "\n";
    os << spectrum_csv(spec_out);
    return os.str();
  }
  Json j = report_head("analyze", config);
  j["spectrum"] = to_json(spec_out);
  if (detection) {
    Json d;
    d["max_den"] = options.max_den;
    d["max_abs"] = options.max_abs;
    d["candidates"] = detection->candidates;
    d["error_bound"] = detection->error_bound;
    d["threshold"] = detection->threshold;
    d["max_rejected"] = detection->max_rejected;
    j["detection"] = std::move(d);
  }
  j["parseval"] = parseval_json(parseval);
  j["invariance_residual"] = residual;
  return dump(j);
}

std::string cmd_synth(const std::string& spectrum_file, std::optional<long long> n, const SessionConfig& config) {
  if (n && *n < 0) throw UsageError("N must be >= 0");
  const Spectrum spec = spectrum_from_json(read_json_file(spectrum_file));
  const std::size_t count = n ? static_cast<std::size_t>(*n) : spec.entries.size();
  const SolenoidPoly s = partial_sum(spec, count);
  check_depth(ProductPoly(s), config);

  if (config.format == OutputFormat::csv) {
    std::ostringstream os;
    os << csv_head("synth", config);
    os << spectrum_csv(Spectrum::make(spectrum(s).entries));
    return os.str();
  }
  Json j = function_spec_to_json(s);
  Json gen = report_head("synth", config);
  gen["N"] = count;
  j["generated_by"] = std::move(gen);
  return dump(j);
}

VerifyResult cmd_verify(const std::string& spec_file, const SessionConfig& config) {
  const FunctionSpec spec = load_spec(spec_file, config);
  struct Check {
    std::string name;
    std::string status;
    double residual;
    double tolerance;
  };
  std::vector<Check> checks;
  auto add = [&](std::string name, double residual, double tol) {
    checks.push_back({std::move(name), residual <= tol ? "pass" : "fail", residual, tol});
  };

  add("invariance", invariance_residual(spec.poly, config), kInvarianceTol);
  const bool invariant = spec.poly.all_descend();
  const char* dependent[] = {"mean_comparison", "parseval_exact", "parseval_numeric", "leaf_transversal"};
  if (!invariant) {
    for (const char* name : dependent) checks.push_back({name, "skip", 0.0, 0.0});
  } else {
    const SolenoidPoly phi = spec.solenoid();
    const ModulusTower tower = ModulusTower::lcm_tower(config.tower_depth);
    std::mt19937_64 rng(kSampleSeed + 1);

    std::vector<ProfiniteInt> ts;
    for (std::size_t i = 0; i < kMeanSamples; ++i) ts.push_back(sample_uniform(tower, rng));
    add("mean_comparison", mean_comparison_check(phi, ts), kExactTol);
    add("parseval_exact", parseval_check(phi).gap, kExactTol);
    add("parseval_numeric", parseval_check_window(phi, config.mean_T).gap, kNumericParsevalTol);

    double leaf_gap = 0.0;
    if (!phi.empty()) {
      const ProfiniteInt zero = embed_int(0, tower);
      std::uniform_int_distribution<std::size_t> pick(0, phi.size() - 1);
      for (std::size_t i = 0; i < kLeafSamples; ++i) {
        const ProfiniteInt t = sample_uniform(tower, rng);
        const Rational& lambda = phi.terms()[pick(rng)].chr.q;
        const Complex lhs = leaf_coefficient(phi, t, lambda);
        const Complex rhs = transversal_factor(lambda, t) * leaf_coefficient(phi, zero, lambda);
        leaf_gap = std::max(leaf_gap, std::abs(lhs - rhs));
      }
    }
    add("leaf_transversal", leaf_gap, kExactTol);
  }

  VerifyResult result;
  result.all_pass = std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == "fail"; });
  if (config.format == OutputFormat::csv) {
    std::ostringstream os;
    os << csv_head("verify", config) << "check,status,residual,tolerance\n";
    for (const auto& c : checks) os << c.name << ',' << c.status << ',' << fmt(c.residual) << ',' << fmt(c.tolerance) << '\n';
    result.report = os.str();
  } else {
    Json j = report_head("verify", config);
    Json arr = Json::array();
    for (const auto& c : checks) {
      Json e;
      e["name"] = c.name;
      e["status"] = c.status;
      e["residual"] = c.residual;
      e["tolerance"] = c.tolerance;
      arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    j["all_pass"] = result.all_pass;
    result.report = dump(j);
  }
  return result;
}

std::string cmd_approx(const std::string& spec_file, const std::vector<long long>& n_list, const SessionConfig& config) {
  // Errors are measured on the base leaf t = 0, an embedded integer, so the
  // tower depth is never consulted and deep dyadic series stay usable.
  const FunctionSpec spec = function_spec_from_json(read_json_file(spec_file));
  if (spec.series && !spec.majorant) throw UsageError("series spec needs a \"majorant\" for approx");
  std::vector<std::size_t> ns;
  for (long long n : n_list) {
    if (n < 0) throw UsageError("N must be >= 0");
    ns.push_back(static_cast<std::size_t>(n));
  }
  if (ns.empty()) {
    for (std::size_t n = 0; n <= spec.poly.terms().size(); ++n) ns.push_back(n);
  }

  const ApproxReport report = spec.series ? approx_report(spec.as_series(), ns, grid_policy(config))
                                          : approx_report(spec.solenoid(), ns, grid_policy(config));
  if (config.format == OutputFormat::csv) {
    std::ostringstream os;
    os << csv_head("approx", config) << "N,sup_error_on_grid,majorant_bound\n";
    for (const auto& r : report.rows) {
      os << r.n << ',' << fmt(r.sup_error) << ',';
      if (r.majorant_bound) os << fmt(*r.majorant_bound);
      os << '\n';
    }
    return os.str();
  }
  Json j = report_head("approx", config);
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json e;
    e["N"] = r.n;
    e["sup_error_on_grid"] = r.sup_error;
    e["majorant_bound"] = r.majorant_bound ? Json(*r.majorant_bound) : Json(nullptr);
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  j["grid_points"] = report.grid_points;
  j["non_increasing"] = report.monotone;
  return dump(j);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  CLI::App app{"Harmonic analysis on the universal solenoid", "solh"};
  app.require_subcommand(1);

  ConfigFlags flags;
  std::size_t depth = 0;
  double mean_T = 0.0;
  double grid = 0.0;
  double threshold = 0.0;
  std::string format;
  std::string out_file;
  auto* o_depth = app.add_option("--depth", depth, "tower depth K (modulus lcm(1..K))");
  auto* o_mean = app.add_option("--mean-T", mean_T, "window-mean horizon T");
  auto* o_grid = app.add_option("--grid", grid, "grid points per smallest period");
  auto* o_thr = app.add_option("--threshold", threshold, "detection threshold factor");
  auto* o_fmt = app.add_option("--format", format, "json or csv");
  app.add_option("--out", out_file, "write the report to this file");

  std::string file;
  auto* analyze = app.add_subcommand("analyze", "spectrum, Parseval gap and invariance residual of a function spec");
  AnalyzeOptions aopts;
  analyze->add_option("spec", file, "function spec JSON")->required();
  analyze->add_flag("--blackbox", aopts.blackbox, "recover the spectrum from base-leaf samples");
  analyze->add_option("--max-den", aopts.max_den, "largest candidate denominator (black box)");
  analyze->add_option("--max-freq", aopts.max_abs, "largest candidate |q| (black box)");

  auto* synth = app.add_subcommand("synth", "partial-sum function spec from a spectrum");
  long long synth_n = 0;
  synth->add_option("spectrum", file, "spectrum JSON (or an analyze report)")->required();
  auto* o_n = synth->add_option("--N", synth_n, "number of terms (default: all)");

  auto* verify = app.add_subcommand("verify", "run the property checks on a function spec");
  verify->add_option("spec", file, "function spec JSON")->required();

  auto* approx = app.add_subcommand("approx", "sup-norm error of partial sums");
  std::vector<long long> n_list;
  approx->add_option("spec", file, "function spec JSON")->required();
  approx->add_option("--N", n_list, "partial-sum orders")->delimiter(',');

  for (auto* sub : {analyze, synth, verify, approx}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return static_cast<int>(ExitCode::ok);
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return static_cast<int>(ExitCode::ok);
  } catch (const CLI::ParseError& e) {
    err << "solh: " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  }

  if (o_depth->count() > 0) flags.tower_depth = depth;
  if (o_mean->count() > 0) flags.mean_T = mean_T;
  if (o_grid->count() > 0) flags.grid_density = grid;
  if (o_thr->count() > 0) flags.threshold_factor = threshold;
  if (o_fmt->count() > 0) flags.format = format;

  try {
    const SessionConfig config = resolve_config(flags, env);
    std::string report;
    int code = static_cast<int>(ExitCode::ok);
    if (analyze->parsed()) {
      report = cmd_analyze(file, config, aopts);
    } else if (synth->parsed()) {
      report = cmd_synth(file, o_n->count() > 0 ? std::optional<long long>(synth_n) : std::nullopt, config);
    } else if (verify->parsed()) {
      VerifyResult r = cmd_verify(file, config);
      report = std::move(r.report);
      if (!r.all_pass) {
        err << "solh: verify: property check failed\n";
        code = static_cast<int>(ExitCode::property);
      }
    } else {
      report = cmd_approx(file, n_list, config);
    }
    if (out_file.empty()) {
      out << report;
    } else {
      std::ofstream f(out_file, std::ios::binary);
      if (!f) throw UsageError("cannot write " + out_file);
      f << report;
    }
    return code;
  } catch (const UsageError& e) {
    err << "solh: usage error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  } catch (const ParseError& e) {
    err << "solh: parse error at " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  } catch (const PrecisionError& e) {
    err << "solh: precision error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::precision);
  } catch (const PropertyFailure& e) {
    err << "solh: property failure: " << e.what() << "\n";
    return static_cast<int>(ExitCode::property);
  } catch (const DomainError& e) {
    err << "solh: property failure: " << e.what() << "\n";
    return static_cast<int>(ExitCode::property);
  } catch (const std::exception& e) {
    err << "solh: error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::internal);
  }
}

}  // namespace solh
