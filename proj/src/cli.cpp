#include "cachelab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "cachelab/error.hpp"
#include "cachelab/schemes.hpp"
#include "cachelab/serialize.hpp"
#include "cachelab/verify.hpp"

namespace cachelab {

namespace {

// Thrown for flag combinations CLI11 cannot express; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatFlags {
  std::string format;
  bool json = false;
  bool csv = false;

  std::string resolve() const {
    if (json) return "json";
    if (csv) return "csv";
    return format;
  }
};

void add_format(CLI::App* sub, FormatFlags& f, const std::string& fallback,
                const std::vector<std::string>& allowed) {
  f.format = fallback;
  auto* fmt = sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember(allowed));
  auto* json = sub->add_flag("--json", f.json, "Shorthand for --format json");
  if (std::find(allowed.begin(), allowed.end(), "csv") != allowed.end()) {
    auto* csv = sub->add_flag("--csv", f.csv, "Shorthand for --format csv");
    csv->excludes(fmt)->excludes(json);
    json->excludes(csv);
    fmt->excludes(csv);
  }
  json->excludes(fmt);
  fmt->excludes(json);
}

int parse_int(const std::string& text, const char* what) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": '" + text + "' is not an integer");
  }
  return v;
}

std::pair<int, int> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const int v = parse_int(text, what);
    return {v, v};
  }
  return {parse_int(text.substr(0, colon), what), parse_int(text.substr(colon + 1), what)};
}

std::vector<int> parse_demand_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "N" || item == "n") out.push_back(kAllFiles);
    else out.push_back(parse_int(item, "--L"));
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, "--L list is empty");
  return out;
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError, "seed '" + text + "' is not a non-negative integer");
  }
  return v;
}

std::string default_seed() {
  const char* env = std::getenv("CACHELAB_SEED");
  return env != nullptr ? std::string(env) : std::string("0");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange:
    case ErrorCode::InsufficientCollectiveStorage:
    case ErrorCode::ModeMismatch:
    case ErrorCode::ParseError:
      return kExitUsage;
    case ErrorCode::DomainError:
    case ErrorCode::DivisibilityError:
    case ErrorCode::NotCorner:
    case ErrorCode::Degenerate:
      return kExitDomain;
    case ErrorCode::PlacementMismatch:
    case ErrorCode::DecodeFailure:
      return kExitSimulationFailed;
  }
  return kExitUsage;
}

struct ConfigFlags {
  std::string mode;
  int n = 0, k = 0, l = 1;
  std::string m;
};

void add_config(CLI::App* sub, ConfigFlags& c, bool with_m) {
  sub->add_option("--mode", c.mode, "cen or d2d")->required();
  sub->add_option("--N", c.n, "Number of files")->required();
  sub->add_option("--K", c.k, "Number of users")->required();
  sub->add_option("--L", c.l, "Demands per user")->capture_default_str();
  if (with_m) sub->add_option("--M", c.m, "Cache size, integer or p/q")->required();
}

SystemConfig build(const ConfigFlags& c) {
  return make_config(c.n, c.k, c.l, ExactRational::parse(c.m), parse_mode(c.mode));
}

std::string header(const SystemConfig& c) {
  return std::string(to_string(c.mode)) + " N=" + std::to_string(c.n_files) +
         " K=" + std::to_string(c.n_users) + " L=" + std::to_string(c.demands_per_user) +
         " M=" + c.cache_size.str() + "\n";
}

struct Result {
  std::string text;
  int code = kExitOk;
};

// --- subcommands --------------------------------------------------------------

Result cmd_bound(const ConfigFlags& cf, bool cutset, bool terms, const std::string& format) {
  const auto config = build(cf);
  const auto r = cutset ? cutset_bound(config) : lower_bound(config);
  const char* family = cutset ? "cutset" : "new";
  if (format == "json") {
    Json j = to_json(config);
    j["bound"] = family;
    j["result"] = to_json(r, terms);
    return {dump(j)};
  }
  if (format == "csv") {
    if (terms) return {terms_csv(r)};
    std::ostringstream os;
    os << "bound,value,s,ell,mu\n"
       << family << ',' << r.value << ',' << r.best_s << ',' << r.best_ell << ',' << r.mu_at_best << '\n';
    return {os.str()};
  }
  std::ostringstream os;
  os << header(config) << "bound: " << family << "\nvalue: " << r.value << "\ns: " << r.best_s
     << "\nell: " << r.best_ell << "\nmu: " << r.mu_at_best << '\n';
  if (terms) {
    os << "terms:\n";
    for (const auto& t : r.terms) {
      os << "  s=" << t.s << " ell=" << t.ell << " mu=" << t.mu << " value=" << t.value << '\n';
    }
  }
  return {os.str()};
}

Result cmd_rate(const ConfigFlags& cf, const std::string& format) {
  const auto config = build(cf);
  const auto env = rate_achievable(config, EvalMode::CornerEnvelope);
  const auto formula = rate_achievable(config, EvalMode::FormulaAtM);
  if (format == "json") {
    Json j = to_json(config);
    j["rate_envelope"] = env.str();
    j["rate_formula"] = formula.str();
    return {dump(j)};
  }
  if (format == "csv") {
    return {"M,rate_envelope,rate_formula\n" + config.cache_size.str() + "," + env.str() + "," +
            formula.str() + "\n"};
  }
  return {header(config) + "rate_envelope: " + env.str() + "\nrate_formula: " + formula.str() + "\n"};
}

struct SimFlags {
  ConfigFlags config;
  std::optional<int> t;
  std::string seed;
  std::string demands = "worst";
  std::string trace;
  std::int64_t file_bits = 0;
};

Result cmd_simulate(const SimFlags& f, const std::string& format) {
  const auto seed = parse_seed(f.seed);
  const DeliveryMode mode = parse_mode(f.config.mode);
  if (f.t && (*f.t < 0 || *f.t > f.config.k)) {
    throw UsageError("--t must lie in [0:K], got " + std::to_string(*f.t));
  }
  if (!f.t && f.config.m.empty()) throw UsageError("simulate needs --t or --M");
  const ExactRational m = f.config.m.empty()
                              ? ExactRational(static_cast<std::int64_t>(f.config.n) * *f.t, f.config.k)
                              : ExactRational::parse(f.config.m);
  SystemConfig config;
  try {
    config = make_config(f.config.n, f.config.k, f.config.l, m, mode, f.file_bits);
  } catch (const Error& e) {
    // no corner point exists below the collective-storage limit
    if (e.code() == ErrorCode::InsufficientCollectiveStorage) throw Error(ErrorCode::NotCorner, e.what());
    throw;
  }
  const int t = f.t ? *f.t : placement_t(config);
  const DemandMatrix demands =
      f.demands == "random" ? random_demands(config, seed) : worst_case_demands(config);
  const SimRun run = simulate_run(config, t, demands, seed);
  const SimReport& r = run.report;

  if (!f.trace.empty()) {
    std::ofstream os(f.trace);
    if (!os) throw UsageError("cannot write trace file " + f.trace);
    os << dump(trace_json(config, demands, seed, run.log));
  }

  const bool ok = r.all_decoded() && r.rate_match;
  Result out;
  out.code = ok ? kExitOk : kExitSimulationFailed;
  if (format == "json") {
    Json j = to_json(config);
    j["seed"] = seed;
    j["demands"] = demands.rows();
    j["report"] = to_json(r);
    out.text = dump(j);
    return out;
  }
  std::ostringstream os;
  const auto decoded = std::count(r.decode_ok.begin(), r.decode_ok.end(), true);
  os << header(config) << "t: " << r.t << "\nstrategy: " << to_string(r.strategy)
     << "\nfile_bits: " << r.file_bits << "\ntransmissions: " << r.transmissions
     << "\ntotal_bits: " << r.total_bits << "\nmeasured_rate: " << r.measured_rate
     << "\nformula_rate: " << r.formula_rate << "\nrate_match: " << (r.rate_match ? "true" : "false")
     << "\nstorage_exact: " << (r.storage_exact ? "true" : "false") << "\ndecoded: " << decoded << "/"
     << r.decode_ok.size() << " users\n";
  if (r.per_device_uniform) {
    os << "per_device_uniform: " << (*r.per_device_uniform ? "true" : "false") << '\n';
  }
  out.text = os.str();
  return out;
}

struct SweepFlags {
  std::string mode;
  std::string n_range = "1:12";
  std::string k_range = "1:12";
  std::string l_list = "1,2,3,N";
  int density = 20;
  int jobs = 1;
  bool records = false;
};

Result cmd_sweep(const SweepFlags& f, const std::string& format) {
  const auto [n_min, n_max] = parse_range(f.n_range, "--N");
  const auto [k_min, k_max] = parse_range(f.k_range, "--K");
  SweepGrid grid{n_min, n_max, k_min, k_max, parse_demand_list(f.l_list), f.density};
  const auto result = sweep(grid, parse_mode(f.mode), f.jobs);
  Result out;
  out.code = result.summary.all_pass() ? kExitOk : kExitVerificationFailed;
  if (format == "json") {
    Json j = to_json(result.summary);
    if (f.records) {
      Json rows = Json::array();
      for (const auto& r : result.records) rows.push_back(to_json(r));
      j["records_detail"] = std::move(rows);
    }
    out.text = dump(j);
  } else if (format == "csv") {
    out.text = sweep_csv(result.records);
  } else {
    const auto& s = result.summary;
    std::ostringstream os;
    os << "mode: " << to_string(s.mode) << "\nrecords: " << s.records
       << "\ndegenerate: " << s.degenerate << "\nmax_gap: " << (s.max_gap ? s.max_gap->str() : "none");
    if (s.max_gap) os << " (" << s.max_gap->decimal(4) << ") at " << s.argmax->key();
    os << '\n';
    for (const auto& c : s.checks) {
      os << c.name << ": " << (c.pass ? "pass" : "fail") << " (threshold " << c.threshold
         << ", observed " << (c.observed_max ? c.observed_max->decimal(4) : "-") << ", " << c.records
         << " records, formula exceedances " << c.formula_exceedances << ")\n";
    }
    out.text = os.str();
  }
  return out;
}

Result cmd_curve(const ConfigFlags& cf, int points, const std::string& format) {
  const auto data = curve(cf.n, cf.k, cf.l, parse_mode(cf.mode), points);
  if (format == "json") return {dump(to_json(data))};
  return {curve_csv(data)};
}

Result cmd_case_study(const std::string& preset, const std::string& format, const TermEvaluator& eval) {
  std::vector<CaseStudy> presets =
      preset.empty() ? all_case_studies() : std::vector<CaseStudy>{parse_case_study(preset)};
  Result out;
  Json arr = Json::array();
  std::ostringstream os;
  for (auto p : presets) {
    const auto r = case_study(p, eval);
    if (!r.all_pass()) out.code = kExitVerificationFailed;
    arr.push_back(to_json(r));
    for (const auto& id : r.identities) {
      os << "case_study:" << to_string(p) << ':' << id.name << ' ' << (id.pass ? "PASS" : "FAIL");
      if (!id.pass) os << "  " << id.detail;
      os << '\n';
    }
  }
  out.text = format == "json" ? dump(arr) : os.str();
  return out;
}

Result cmd_verify(bool full, int jobs, const std::string& format, const TermEvaluator& eval) {
  const auto report = run_verify(full ? VerifyLevel::Full : VerifyLevel::Quick, eval, jobs);
  Result out;
  out.code = report.all_pass() ? kExitOk : kExitVerificationFailed;
  if (format == "json") {
    Json arr = Json::array();
    for (const auto& c : report.checks) {
      arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    Json j;
    j["level"] = full ? "full" : "quick";
    j["pass"] = report.all_pass();
    j["checks"] = std::move(arr);
    out.text = dump(j);
    return out;
  }
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& c : report.checks) {
    os << c.name << ' ' << (c.pass ? "PASS" : "FAIL");
    if (!c.detail.empty()) os << "  " << c.detail;
    os << '\n';
    passed += c.pass ? 1 : 0;
  }
  os << "verify: " << passed << "/" << report.checks.size() << " checks passed\n";
  if (const auto* f = report.first_failure()) os << "first failure: " << f->name << '\n';
  out.text = os.str();
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliHooks& hooks) {
  CLI::App app{"Exact storage-rate bounds, scheme simulation and gap sweeps for cache-aided networks",
               "cachelab"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string out_path;
  app.add_option("--out", out_path, "Write the result to this file instead of stdout");

  ConfigFlags bound_cf;
  bool cutset = false, terms = false;
  FormatFlags bound_fmt;
  auto* bound = app.add_subcommand("bound", "Lower bound at one configuration");
  add_config(bound, bound_cf, true);
  bound->add_flag("--cutset", cutset, "Print the cut-set baseline instead");
  bound->add_flag("--terms", terms, "Include every (s, ell) term");
  add_format(bound, bound_fmt, "human", {"human", "json", "csv"});

  ConfigFlags rate_cf;
  FormatFlags rate_fmt;
  auto* rate = app.add_subcommand("rate", "Achievable rate (memory-sharing envelope and closed form)");
  add_config(rate, rate_cf, true);
  add_format(rate, rate_fmt, "human", {"human", "json", "csv"});

  SimFlags sim;
  sim.seed = default_seed();
  FormatFlags sim_fmt;
  auto* simulate_cmd = app.add_subcommand("simulate", "Bit-exact simulation at a corner point");
  add_config(simulate_cmd, sim.config, false);
  simulate_cmd->add_option("--M", sim.config.m, "Cache size (alternative to --t)");
  simulate_cmd->add_option("--t", sim.t, "Placement parameter t = K*M/N");
  simulate_cmd->add_option("--seed", sim.seed, "Library and demand seed (default $CACHELAB_SEED or 0)");
  simulate_cmd->add_option("--demands", sim.demands, "worst or random")
      ->check(CLI::IsMember({"worst", "random"}));
  simulate_cmd->add_option("--trace", sim.trace, "Write the transmission trace as JSON");
  simulate_cmd->add_option("--file-bits", sim.file_bits, "File size B in bits (default: smallest aligned)");
  add_format(simulate_cmd, sim_fmt, "human", {"human", "json"});

  SweepFlags sw;
  FormatFlags sweep_fmt;
  auto* sweep_cmd = app.add_subcommand("sweep", "Gap sweep over a parameter grid");
  sweep_cmd->add_option("--mode", sw.mode, "cen or d2d")->required();
  sweep_cmd->add_option("--N", sw.n_range, "File counts, a or a:b")->capture_default_str();
  sweep_cmd->add_option("--K", sw.k_range, "User counts, a or a:b")->capture_default_str();
  sweep_cmd->add_option("--L", sw.l_list, "Comma-separated demand values; N means L = N")
      ->capture_default_str();
  sweep_cmd->add_option("--density", sw.density, "Uniform M points per unit of M/N")
      ->capture_default_str();
  sweep_cmd->add_option("--jobs", sw.jobs, "Worker threads")->capture_default_str();
  sweep_cmd->add_flag("--records", sw.records, "Include every record in JSON output");
  add_format(sweep_cmd, sweep_fmt, "csv", {"human", "json", "csv"});

  ConfigFlags curve_cf;
  int points = 41;
  FormatFlags curve_fmt;
  auto* curve_cmd = app.add_subcommand("curve", "Bound and rate columns over a grid of M");
  add_config(curve_cmd, curve_cf, false);
  curve_cmd->add_option("--points", points, "Uniform M points (corners are added)")->capture_default_str();
  add_format(curve_cmd, curve_fmt, "csv", {"json", "csv"});

  std::string preset;
  FormatFlags case_fmt;
  auto* case_cmd = app.add_subcommand("case-study", "Check the worked examples as exact identities");
  case_cmd->add_option("--preset", preset, "CEN_N3K3, CEN_N2K2 or D2D_N3K3 (default: all)");
  add_format(case_cmd, case_fmt, "human", {"human", "json"});

  bool quick = false, full = false;
  int verify_jobs = 1;
  FormatFlags verify_fmt;
  auto* verify_cmd = app.add_subcommand("verify", "Run the built-in verification suite");
  auto* quick_opt = verify_cmd->add_flag("--quick", quick, "Case studies and small grids (default)");
  auto* full_opt = verify_cmd->add_flag("--full", full, "Complete grids");
  quick_opt->excludes(full_opt);
  full_opt->excludes(quick_opt);
  verify_cmd->add_option("--jobs", verify_jobs, "Worker threads for the sweeps")->capture_default_str();
  add_format(verify_cmd, verify_fmt, "human", {"human", "json"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  Result result;
  try {
    if (bound->parsed()) result = cmd_bound(bound_cf, cutset, terms, bound_fmt.resolve());
    else if (rate->parsed()) result = cmd_rate(rate_cf, rate_fmt.resolve());
    else if (simulate_cmd->parsed()) {
      try {
        result = cmd_simulate(sim, sim_fmt.resolve());
      } catch (const Error& e) {
        if (e.code() == ErrorCode::InsufficientCollectiveStorage) {
          err << "error: " << e.what() << '\n';
          return kExitDomain;
        }
        throw;
      }
    } else if (sweep_cmd->parsed()) result = cmd_sweep(sw, sweep_fmt.resolve());
    else if (curve_cmd->parsed()) result = cmd_curve(curve_cf, points, curve_fmt.resolve());
    else if (case_cmd->parsed()) result = cmd_case_study(preset, case_fmt.resolve(), hooks.evaluator);
    else if (verify_cmd->parsed()) result = cmd_verify(full, verify_jobs, verify_fmt.resolve(), hooks.evaluator);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }

  if (!out_path.empty()) {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
      err << "error: cannot write " << out_path << '\n';
      return kExitUsage;
    }
    os << result.text;
  } else {
    out << result.text;
  }
  return result.code;
}

}  // namespace cachelab
