#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphon_lab/clique.hpp"
#include "graphon_lab/errors.hpp"
#include "graphon_lab/experiments.hpp"
#include "graphon_lab/format.hpp"
#include "graphon_lab/graphon.hpp"
#include "graphon_lab/moments.hpp"
#include "graphon_lab/report_json.hpp"
#include "graphon_lab/sampler.hpp"
#include "graphon_lab/version.hpp"

namespace graphon_lab::cli {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    T value{};
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw UsageError("invalid value for '" + key + "': '" + item + "' in '" + text + "'");
    out.push_back(value);
  }
  if (out.empty()) throw UsageError("'" + key + "' needs at least one value");
  return out;
}

// `key = value` lines; `#` starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    for (char& c : key)
      if (c == '_') c = '-';
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return entries;
}

GraphonSpec parse_spec(const std::string& key, const std::string& text) {
  try {
    return GraphonSpec::parse(text);
  } catch (const Error& e) {
    throw UsageError("invalid value for '" + key + "': " + e.what());
  }
}

struct Flags {
  std::string config;
  std::string n_grid;
  std::string cuts;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& desc) {
  CLI::App* sub = app.add_subcommand(name, desc);
  sub->fallthrough(false);
  return sub;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  cfg.jobs = default_jobs();
  Flags flags;

  CLI::App app{"Sample W-random graphs, compute clique numbers and moments, and run "
               "Monte Carlo studies.",
               "graphon-lab"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);

  const std::string graphon_help = "graphon spec, e.g. sqrt:r=1, poly:r=2, const:p=0.5, line";
  auto add_graphon = [&](CLI::App* s) { s->add_option("--graphon", cfg.graphon, graphon_help); };
  auto add_n = [&](CLI::App* s) { s->add_option("--n", cfg.n, "number of vertices"); };
  auto add_k = [&](CLI::App* s) { s->add_option("--k", cfg.k, "clique size"); };
  auto add_seed = [&](CLI::App* s) {
    s->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  };
  auto add_trials = [&](CLI::App* s) {
    s->add_option("--trials", cfg.trials, "independent trials (0: command default)");
  };
  auto add_method = [&](CLI::App* s, const std::string& choices) {
    s->add_option("--method", cfg.method, choices);
  };
  auto add_window = [&](CLI::App* s) {
    s->add_option("--threshold", cfg.threshold, "half-width of the coordinate window");
    s->add_option("--center", cfg.center, "center of the coordinate window")
        ->capture_default_str();
  };
  auto add_budget = [&](CLI::App* s) {
    s->add_option("--budget-nodes", cfg.budget_nodes, "exact solver node budget")
        ->capture_default_str();
    s->add_option("--budget-ms", cfg.budget_ms, "exact solver time budget (ms)")
        ->capture_default_str();
  };
  auto add_jobs = [&](CLI::App* s) {
    s->add_option("--jobs", cfg.jobs,
                  "worker threads (default: GRAPHON_LAB_JOBS or hardware threads)");
  };
  auto add_config = [&](CLI::App* s) {
    s->add_option("--config", flags.config, "file of 'key = value' lines; flags take precedence");
  };
  auto add_table = [&](CLI::App* s, const std::string& desc) {
    s->add_flag("--table", cfg.table, desc);
  };

  CLI::App* sample_cmd = add_command(app, "sample", "draw a W-random graph");
  add_graphon(sample_cmd);
  add_n(sample_cmd);
  add_seed(sample_cmd);
  add_window(sample_cmd);
  sample_cmd->add_option("--out", cfg.out, "edge-list path (coordinates go to <out>.coords)");
  add_config(sample_cmd);

  CLI::App* clique_cmd = add_command(app, "clique", "compute a clique of a sampled or stored graph");
  clique_cmd->add_option("--in", cfg.in, "edge-list file to read instead of sampling");
  add_graphon(clique_cmd);
  add_n(clique_cmd);
  add_seed(clique_cmd);
  add_method(clique_cmd, "exact (default), threshold_greedy or degree_greedy");
  add_window(clique_cmd);
  add_budget(clique_cmd);
  add_config(clique_cmd);

  CLI::App* moments_cmd = add_command(app, "moments", "log expected number of k-cliques");
  add_graphon(moments_cmd);
  add_n(moments_cmd);
  add_k(moments_cmd);
  add_table(moments_cmd, "CSV rows n,k,log_expected for k = 1..K");
  add_config(moments_cmd);

  CLI::App* cutoff_cmd = add_command(app, "cutoff", "first-moment clique cutoff");
  add_graphon(cutoff_cmd);
  add_n(cutoff_cmd);
  add_config(cutoff_cmd);

  CLI::App* variance_cmd = add_command(app, "variance", "second-moment ratio E[X_k^2]/E[X_k]^2");
  add_graphon(variance_cmd);
  add_n(variance_cmd);
  add_k(variance_cmd);
  add_table(variance_cmd, "CSV rows n,k,log_expected,log_ratio for k = 1..K");
  add_config(variance_cmd);

  CLI::App* scaling_cmd = add_command(app, "scaling", "clique-number scaling study");
  add_graphon(scaling_cmd);
  scaling_cmd->add_option("--n-grid", flags.n_grid, "comma-separated vertex counts");
  add_trials(scaling_cmd);
  add_seed(scaling_cmd);
  add_method(scaling_cmd, "threshold_greedy (default), exact, best_of or degree_greedy");
  add_window(scaling_cmd);
  add_budget(scaling_cmd);
  add_jobs(scaling_cmd);
  scaling_cmd->add_option("--out", cfg.out, "directory for the run folder (trials.csv, summary.json)");
  add_config(scaling_cmd);

  CLI::App* conc_cmd = add_command(app, "concentration", "spread of the clique number over trials");
  add_graphon(conc_cmd);
  add_n(conc_cmd);
  add_trials(conc_cmd);
  add_seed(conc_cmd);
  add_method(conc_cmd, "exact (default), threshold_greedy, best_of or degree_greedy");
  add_window(conc_cmd);
  add_budget(conc_cmd);
  add_jobs(conc_cmd);
  add_config(conc_cmd);

  CLI::App* check_cmd = add_command(app, "check", "run a property suite; exit 1 on failure");
  check_cmd->add_option("--suite", cfg.suite,
                        "dominance, partition, interval, moment or union_bound");
  add_graphon(check_cmd);
  check_cmd->add_option("--lower", cfg.lower, "dominated graphon (dominance suite)");
  check_cmd->add_option("--upper", cfg.upper, "dominating graphon (dominance suite)");
  add_n(check_cmd);
  check_cmd->add_option("--n-grid", flags.n_grid, "comma-separated vertex counts (union_bound)");
  add_k(check_cmd);
  add_trials(check_cmd);
  add_seed(check_cmd);
  check_cmd->add_option("--cuts", flags.cuts, "comma-separated cut points (partition; default 0.5)");
  add_budget(check_cmd);
  add_jobs(check_cmd);
  add_config(check_cmd);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream hs;
    app.exit(e, hs, hs);
    cfg.help = true;
    cfg.help_text = hs.str();
    return cfg;
  } catch (const CLI::CallForVersion& e) {
    cfg.help = true;
    cfg.help_text = std::string(kVersion) + "\n";
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();

  if (!flags.config.empty()) {
    for (const auto& [key, value] : read_config_file(flags.config)) {
      CLI::Option* opt = sub->get_option_no_throw("--" + key);
      if (opt == nullptr || key == "config")
        throw UsageError("unknown config key '" + key + "' for command '" + cfg.command + "'");
      if (opt->count() > 0) continue;  // command-line flag wins
      try {
        if (opt->get_type_size() == 0) {
          if (value != "true" && value != "false")
            throw UsageError("config key '" + key + "' expects true or false");
          if (value == "false") continue;
        }
        opt->add_result(opt->get_type_size() == 0 ? std::string("true") : value);
        opt->run_callback();
      } catch (const CLI::Error& e) {
        throw UsageError("invalid value for '" + key + "': " + e.what());
      }
    }
  }

  auto given = [&](const std::string& key) {
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    return opt != nullptr && opt->count() > 0;
  };
  auto require = [&](const std::string& key) {
    if (!given(key))
      throw UsageError("missing required key '" + key + "' for command '" + cfg.command + "'");
  };

  if (!flags.n_grid.empty()) cfg.n_grid = parse_list<std::size_t>("n-grid", flags.n_grid);
  if (!flags.cuts.empty()) cfg.cuts = parse_list<double>("cuts", flags.cuts);
  if (cfg.jobs == 0) throw UsageError("invalid value for 'jobs': must be positive");

  const std::string& c = cfg.command;
  if (c == "sample" || c == "cutoff" || c == "concentration") {
    require("graphon");
    require("n");
  } else if (c == "moments" || c == "variance") {
    require("graphon");
    require("n");
    require("k");
  } else if (c == "scaling") {
    require("graphon");
    require("n-grid");
  } else if (c == "clique") {
    if (given("in")) {
      if (given("graphon")) throw UsageError("conflicting keys 'in' and 'graphon'");
      if (given("n")) throw UsageError("conflicting keys 'in' and 'n'");
    } else {
      require("graphon");
      require("n");
    }
  } else if (c == "check") {
    require("suite");
    const std::string& s = cfg.suite;
    if (s == "dominance") {
      require("lower");
      require("upper");
      require("n");
    } else if (s == "partition") {
      require("graphon");
      require("n");
    } else if (s == "moment") {
      require("graphon");
      require("n");
      require("k");
    } else if (s == "union_bound") {
      if (!given("n") && !given("n-grid")) require("n-grid");
      if (given("n") && given("n-grid")) throw UsageError("conflicting keys 'n' and 'n-grid'");
    } else if (s != "interval") {
      throw UsageError("invalid value for 'suite': '" + s +
                       "' (expected dominance, partition, interval, moment, union_bound)");
    }
  }

  if (!cfg.graphon.empty()) {
    GraphonSpec spec = parse_spec("graphon", cfg.graphon);
    if (c == "moments" || c == "cutoff" || c == "variance" ||
        (c == "check" && cfg.suite == "moment")) {
      try {
        moment_method(spec);
      } catch (const UnsupportedSpecError& e) {
        throw UsageError("invalid value for 'graphon': " + std::string(e.what()));
      }
    }
  }
  if (!cfg.lower.empty()) parse_spec("lower", cfg.lower);
  if (!cfg.upper.empty()) parse_spec("upper", cfg.upper);
  if (!cfg.method.empty()) {
    try {
      if (c == "clique")
        parse_clique_method(cfg.method);
      else
        parse_study_method(cfg.method);
    } catch (const Error& e) {
      throw UsageError("invalid value for 'method': " + std::string(e.what()));
    }
  }
  return cfg;
}

namespace {

SolveBudget budget_of(const RunConfig& cfg) {
  return SolveBudget{cfg.budget_nodes, cfg.budget_ms};
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

json with_provenance(const std::string& tag, std::uint64_t seed, const json& body) {
  json j = provenance(tag, seed);
  j.update(body);
  return j;
}

int run_sample(const RunConfig& cfg, std::ostream& out) {
  GraphonSpec spec = GraphonSpec::parse(cfg.graphon);
  SampleConfig sc{spec, cfg.n, cfg.seed};
  if (cfg.threshold) sc.mode = BelowThreshold{*cfg.threshold, cfg.center};
  SampledGraph g = sample_graph(sc);
  if (!cfg.out.empty()) write_edge_list(g, cfg.out);
  json body{{"n", cfg.n}, {"vertices", g.n()}, {"edges", g.edge_count()}};
  if (g.thinning())
    body["window"] = {g.thinning()->window.lo(), g.thinning()->window.hi()};
  if (!cfg.out.empty()) body["out"] = cfg.out;
  emit(out, with_provenance(spec.to_string(), cfg.seed, body));
  return 0;
}

int run_clique(const RunConfig& cfg, std::ostream& out) {
  CliqueMethod method = cfg.method.empty() ? CliqueMethod::exact : parse_clique_method(cfg.method);
  SampledGraph g;
  std::string tag;
  std::optional<GraphonSpec> spec;
  if (!cfg.in.empty()) {
    g = read_edge_list(cfg.in);
    tag = "file:" + cfg.in;
  } else {
    spec = GraphonSpec::parse(cfg.graphon);
    g = sample(SampleConfig{*spec, cfg.n, cfg.seed});
    tag = spec->to_string();
  }
  CliqueResult r;
  switch (method) {
    case CliqueMethod::exact:
      r = exact_max_clique(g, budget_of(cfg));
      break;
    case CliqueMethod::degree_greedy:
      r = degree_greedy_clique(g);
      break;
    case CliqueMethod::threshold_greedy: {
      ThresholdChoice w{cfg.center, 0.0};
      if (cfg.threshold)
        w.threshold = *cfg.threshold;
      else if (spec)
        w = default_threshold(*spec, cfg.n);
      else
        throw PreconditionError("threshold_greedy on an imported graph needs --threshold");
      r = threshold_greedy_clique(g, w.center, w.threshold);
      break;
    }
  }
  json body = to_json(r);
  body["n"] = g.n();
  emit(out, with_provenance(tag, cfg.seed, body));
  return 0;
}

int run_moments(const RunConfig& cfg, std::ostream& out) {
  GraphonSpec spec = GraphonSpec::parse(cfg.graphon);
  if (cfg.table) {
    out << "n,k,log_expected\n";
    for (std::size_t k = 1; k <= cfg.k; ++k)
      out << cfg.n << ',' << k << ','
          << format_double(log_expected_cliques(spec, cfg.n, k).log_expected) << '\n';
    return 0;
  }
  emit(out, with_provenance(spec.to_string(), cfg.seed,
                            to_json(log_expected_cliques(spec, cfg.n, cfg.k))));
  return 0;
}

int run_cutoff(const RunConfig& cfg, std::ostream& out) {
  GraphonSpec spec = GraphonSpec::parse(cfg.graphon);
  emit(out, with_provenance(spec.to_string(), cfg.seed, to_json(first_moment_cutoff(spec, cfg.n))));
  return 0;
}

int run_variance(const RunConfig& cfg, std::ostream& out) {
  GraphonSpec spec = GraphonSpec::parse(cfg.graphon);
  if (cfg.table) {
    out << "n,k,log_expected,log_ratio\n";
    for (std::size_t k = 1; k <= cfg.k && 2 * k <= cfg.n; ++k)
      out << cfg.n << ',' << k << ','
          << format_double(log_expected_cliques(spec, cfg.n, k).log_expected) << ','
          << format_double(variance_ratio(spec, cfg.n, k).log_ratio) << '\n';
    return 0;
  }
  json body = to_json(variance_ratio(spec, cfg.n, cfg.k));
  body["log_expected"] = log_expected_cliques(spec, cfg.n, cfg.k).log_expected;
  emit(out, with_provenance(spec.to_string(), cfg.seed, body));
  return 0;
}

StudyOptions study_options(const RunConfig& cfg, StudyMethod fallback, std::size_t trials) {
  StudyOptions o;
  o.method = cfg.method.empty() ? fallback : parse_study_method(cfg.method);
  o.trials = cfg.trials == 0 ? trials : cfg.trials;
  o.seed = cfg.seed;
  o.jobs = cfg.jobs;
  o.budget = budget_of(cfg);
  o.threshold = cfg.threshold;
  o.center = cfg.center;
  return o;
}

int run_scaling(const RunConfig& cfg, std::ostream& out) {
  GraphonSpec spec = GraphonSpec::parse(cfg.graphon);
  ScalingReport report =
      scaling_study(spec, cfg.n_grid, study_options(cfg, StudyMethod::threshold_greedy, 10));
  json j = to_json(report);
  if (!cfg.out.empty()) j["run_dir"] = write_scaling_run(report, cfg.out);
  emit(out, j);
  return 0;
}

int run_concentration(const RunConfig& cfg, std::ostream& out) {
  GraphonSpec spec = GraphonSpec::parse(cfg.graphon);
  StudyOptions o = study_options(cfg, StudyMethod::exact, 20);
  json body = to_json(concentration_check(spec, cfg.n, o));
  body["method"] = to_string(o.method);
  emit(out, with_provenance(spec.to_string(), cfg.seed, body));
  return 0;
}

int run_check(const RunConfig& cfg, std::ostream& out) {
  SuiteOptions o;
  o.seed = cfg.seed;
  o.jobs = cfg.jobs;
  o.budget = budget_of(cfg);
  auto trials_or = [&](std::size_t d) { return cfg.trials == 0 ? d : cfg.trials; };
  SuiteResult result;
  std::string tag = cfg.graphon;
  if (cfg.suite == "dominance") {
    o.trials = trials_or(50);
    GraphonSpec lo = GraphonSpec::parse(cfg.lower), hi = GraphonSpec::parse(cfg.upper);
    tag = lo.to_string() + " <= " + hi.to_string();
    result = dominance_suite(lo, hi, cfg.n, o);
  } else if (cfg.suite == "partition") {
    o.trials = trials_or(20);
    GraphonSpec spec = GraphonSpec::parse(cfg.graphon);
    tag = spec.to_string();
    result = partition_suite(spec, cfg.n, cfg.cuts, o);
  } else if (cfg.suite == "interval") {
    IntervalSuiteOptions io;
    io.trials = trials_or(100);
    io.seed = cfg.seed;
    io.jobs = cfg.jobs;
    tag = "uniform";
    result = interval_suite(io);
  } else if (cfg.suite == "moment") {
    GraphonSpec spec = GraphonSpec::parse(cfg.graphon);
    MomentCheck mc = moment_mc_check(spec, cfg.n, cfg.k, trials_or(100'000), cfg.seed, cfg.jobs);
    json body = to_json(mc);
    const bool passed = std::abs(mc.z_score) <= 3.0;
    body["suite"] = "moment";
    body["passed"] = passed;
    emit(out, with_provenance(spec.to_string(), cfg.seed, body));
    return passed ? 0 : 1;
  } else {
    o.trials = trials_or(20);
    GraphonSpec spec = cfg.graphon.empty() ? GraphonSpec::line() : GraphonSpec::parse(cfg.graphon);
    tag = spec.to_string();
    std::vector<std::size_t> grid = cfg.n_grid.empty() ? std::vector<std::size_t>{cfg.n} : cfg.n_grid;
    result = union_bound_upper_check(spec, grid, o);
  }
  emit(out, with_provenance(tag, cfg.seed, to_json(result)));
  return result.passed ? 0 : 1;
}

}  // namespace

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.help) {
    out << cfg.help_text;
    return 0;
  }
  try {
    const std::string& c = cfg.command;
    if (c == "sample") return run_sample(cfg, out);
    if (c == "clique") return run_clique(cfg, out);
    if (c == "moments") return run_moments(cfg, out);
    if (c == "cutoff") return run_cutoff(cfg, out);
    if (c == "variance") return run_variance(cfg, out);
    if (c == "scaling") return run_scaling(cfg, out);
    if (c == "concentration") return run_concentration(cfg, out);
    if (c == "check") return run_check(cfg, out);
    err << "graphon-lab: unknown command '" << c << "'\n";
  } catch (const std::exception& e) {
    err << "graphon-lab " << cfg.command << ": error: " << e.what() << '\n';
  }
  return static_cast<int>(ExitCode::usage);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const UsageError& e) {
    err << "graphon-lab: usage error: " << e.what() << "\nRun with --help for usage.\n";
    return static_cast<int>(ExitCode::usage);
  }
  return dispatch(cfg, out, err);
}

}  // namespace graphon_lab::cli
