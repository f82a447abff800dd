// Command-line front end: simulate | sweep | bench | ope.
// Exit codes: 0 success, 1 run failure, 2 usage/config error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qdb/qdb.hpp"

namespace {

using qdb::json;

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  int seeds = -1;  // -1: take from config
  int jobs = 1;
  std::string policies_csv;
  std::string var;
  std::string values_csv;
  std::string tmax_csv = "100,250,500";
  std::string log_path;
  bool synthetic = false;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(item);
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const std::string& item : split_csv(s)) out.push_back(std::stod(item));
  return out;
}

qdb::FieldParams field_from_json(const json& f) {
  qdb::detail::reject_unknown_keys(
      f, {"rho_x", "rho_t", "alpha", "sigma_noise", "K", "T", "tau_s"}, "field");
  qdb::FieldParams fp;
  fp.rho_x = qdb::detail::get_or(f, "rho_x", fp.rho_x);
  fp.rho_t = qdb::detail::get_scale(f, "rho_t", fp.rho_t);
  fp.alpha = qdb::detail::get_or(f, "alpha", fp.alpha);
  fp.sigma_noise = qdb::detail::get_or(f, "sigma_noise", fp.sigma_noise);
  fp.k_arms = qdb::detail::get_or(f, "K", fp.k_arms);
  fp.t_rounds = qdb::detail::get_or(f, "T", fp.t_rounds);
  fp.tau_s = qdb::detail::get_or(f, "tau_s", fp.tau_s);
  return fp;
}

std::vector<qdb::PolicySpec> policies_from_json(const json& arr) {
  std::vector<qdb::PolicySpec> out;
  for (const json& item : arr) {
    qdb::PolicySpec spec;
    if (item.is_string()) {
      spec.name = item.get<std::string>();
    } else {
      qdb::detail::reject_unknown_keys(item, {"name", "params"}, "policies[]");
      spec.name = item.at("name").get<std::string>();
      if (item.contains("params")) spec.params = item.at("params");
    }
    out.push_back(std::move(spec));
  }
  return out;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config: " + path);
  json doc;
  f >> doc;
  return doc;
}

qdb::ExperimentConfig experiment_from_config(const json& doc, const CliOptions& opts) {
  qdb::detail::reject_unknown_keys(
      doc, {"field", "policies", "warmup_rounds", "n_seeds", "seed_base", "ope"}, "");
  qdb::ExperimentConfig config;
  if (doc.contains("field")) config.field = field_from_json(doc.at("field"));
  if (doc.contains("policies")) config.policies = policies_from_json(doc.at("policies"));
  config.warmup_rounds = qdb::detail::get_or(doc, "warmup_rounds", 100);
  config.n_seeds = qdb::detail::get_or(doc, "n_seeds", 20);
  config.seed_base = qdb::detail::get_or<std::uint64_t>(doc, "seed_base", 0);

  if (!opts.policies_csv.empty()) {
    config.policies.clear();
    for (const std::string& name : split_csv(opts.policies_csv)) config.policies.push_back({name, {}});
  }
  if (config.policies.empty())
    config.policies = {{"quickdraw", {}}, {"greedy", {}}, {"restless", {}}, {"random", {}}};
  if (opts.seeds > 0) config.n_seeds = opts.seeds;
  if (opts.seed != 0) config.seed_base = opts.seed;
  return config;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output: " + path);
  return file;
}

int cmd_simulate(const CliOptions& opts) {
  qdb::ExperimentConfig config = experiment_from_config(load_config(opts.config_path), opts);
  qdb::EnsembleResult result = qdb::run_ensemble(config, opts.jobs);
  std::ofstream file;
  qdb::write_ensemble_csv(open_out(file, opts.out_path), result.rows);
  std::fprintf(stderr, "%-12s %12s %12s %6s\n", "policy", "mean_regret", "std", "seeds");
  for (const qdb::EnsembleSummary& s : result.summaries)
    std::fprintf(stderr, "%-12s %12.6f %12.6f %6d\n", s.policy.c_str(), s.mean, s.stddev, s.n);
  return 0;
}

int cmd_sweep(const CliOptions& opts) {
  qdb::ExperimentConfig config = experiment_from_config(load_config(opts.config_path), opts);
  const std::vector<double> values = parse_doubles(opts.values_csv);
  std::vector<qdb::SweepRow> rows = qdb::run_sweep(config, opts.var, values, opts.jobs);
  std::ofstream file;
  qdb::write_sweep_csv(open_out(file, opts.out_path), rows);
  return 0;
}

int cmd_bench(const CliOptions& opts) {
  std::vector<long> t_values;
  for (double v : parse_doubles(opts.tmax_csv)) t_values.push_back(static_cast<long>(v));
  std::vector<qdb::BenchRow> rows = qdb::bench_runtime(t_values, 100, opts.seed == 0 ? 17 : opts.seed);
  std::ofstream file;
  std::ostream& os = open_out(file, opts.out_path);
  os << "policy,T,cumulative_seconds,ratio_vs_quickdraw\n";
  for (const qdb::BenchRow& r : rows) {
    double qd_time = 0.0;
    for (const qdb::BenchRow& q : rows)
      if (q.policy == "quickdraw" && q.t_rounds == r.t_rounds) qd_time = q.cumulative_seconds;
    os << r.policy << ',' << r.t_rounds << ',' << qdb::format_double(r.cumulative_seconds) << ','
       << qdb::format_double(qd_time > 0 ? r.cumulative_seconds / qd_time : 0.0) << '\n';
  }
  return 0;
}

// Default synthetic environment for `ope --synthetic`: a sparse-payout bump
// oscillating across the arm space over the course of the log.
double synth_mean(const qdb::ArmSpace& space, int arm, double t01) {
  const double x = space.coordinate(arm);
  const double center = 0.6 * std::sin(2.0 * 3.14159265358979 * 8.0 * t01);
  const double d = (x - center) / 0.3;
  return 0.004 + 0.12 * std::exp(-d * d);
}

int cmd_ope(const CliOptions& opts) {
  const json doc = load_config(opts.config_path);
  qdb::detail::reject_unknown_keys(
      doc, {"field", "policies", "warmup_rounds", "n_seeds", "seed_base", "ope"}, "");
  json ope_cfg = doc.contains("ope") ? doc.at("ope") : json::object();
  qdb::detail::reject_unknown_keys(ope_cfg, {"n_trials", "schema", "synthetic"}, "ope");

  std::vector<qdb::LoggedEvent> events;
  if (opts.synthetic) {
    json syn = ope_cfg.contains("synthetic") ? ope_cfg.at("synthetic") : json::object();
    qdb::detail::reject_unknown_keys(syn, {"K", "events"}, "ope.synthetic");
    const int k = qdb::detail::get_or(syn, "K", 46);
    const long n = qdb::detail::get_or<long>(syn, "events", 20000);
    const qdb::ArmSpace space = qdb::ArmSpace::uniform_grid(k);
    events = qdb::synth_log(
        k, n, [&](int arm, double t01) { return synth_mean(space, arm, t01); }, opts.seed);
  } else {
    if (opts.log_path.empty()) throw std::invalid_argument("ope: need a log path or --synthetic");
    if (!ope_cfg.contains("schema"))
      throw std::invalid_argument("ope: config is missing the schema mapping (ope.schema)");
    const json& sj = ope_cfg.at("schema");
    qdb::detail::reject_unknown_keys(
        sj, {"timestamp", "action", "reward", "pscore", "item_feature", "user_features"}, "ope.schema");
    qdb::SchemaMapping schema;
    for (const char* key : {"timestamp", "action", "reward", "pscore", "item_feature"})
      if (!sj.contains(key))
        throw std::invalid_argument(std::string("ope: schema mapping missing column: ") + key);
    schema.timestamp = sj.at("timestamp").get<std::string>();
    schema.action = sj.at("action").get<std::string>();
    schema.reward = sj.at("reward").get<std::string>();
    schema.pscore = sj.at("pscore").get<std::string>();
    schema.item_feature = sj.at("item_feature").get<std::string>();
    if (sj.contains("user_features"))
      schema.user_features = sj.at("user_features").get<std::vector<std::string>>();
    qdb::IngestReport report = qdb::ingest_log(opts.log_path, schema);
    for (const std::string& msg : report.rejected) std::fprintf(stderr, "rejected %s\n", msg.c_str());
    events = std::move(report.events);
  }

  std::vector<qdb::PolicySpec> policies;
  if (!opts.policies_csv.empty()) {
    for (const std::string& name : split_csv(opts.policies_csv)) policies.push_back({name, {}});
  } else if (doc.contains("policies")) {
    policies = policies_from_json(doc.at("policies"));
  } else {
    policies = {{"quickdraw", {}}, {"greedy", {}}, {"restless", {}}, {"sw_gp_ucb", {}}, {"random", {}}};
  }

  std::vector<std::string> notices;
  std::vector<qdb::ReplaySegment> segments = qdb::segment(events, &notices);
  for (const std::string& msg : notices) std::fprintf(stderr, "%s\n", msg.c_str());

  qdb::IpsOptions ips_opts;
  ips_opts.n_trials = qdb::detail::get_or(ope_cfg, "n_trials", 10);
  ips_opts.seed = opts.seed;

  std::ofstream file;
  std::ostream& os = open_out(file, opts.out_path);
  os << "policy,mean,std\n";
  for (const qdb::PolicySpec& spec : policies) {
    qdb::IpsResult r = qdb::ips_evaluate(spec, segments, ips_opts);
    os << spec.name << ',' << qdb::format_double(r.mean) << ',' << qdb::format_double(r.stddev)
       << '\n';
    std::fprintf(stderr, "%-12s V_hat = %.6f +/- %.6f\n", spec.name.c_str(), r.mean, r.stddev);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quick-Draw bandit simulator and off-policy evaluator"};
  app.require_subcommand(1);
  CliOptions opts;

  app.add_option("--config", opts.config_path, "JSON config file (defaults cover every key)");
  app.add_option("--seed", opts.seed, "base random seed");
  app.add_option("--jobs", opts.jobs, "worker threads for independent seeds");
  app.add_option("--out", opts.out_path, "output CSV path (default: stdout)");

  auto* sim = app.add_subcommand("simulate", "run a policy-comparison ensemble -> ensemble.csv");
  sim->add_option("--seeds", opts.seeds, "number of replications");
  sim->add_option("--policies", opts.policies_csv,
                  "comma list: quickdraw,greedy,restless,sw_gp_ucb,sliding_ucb,random");

  auto* sweep = app.add_subcommand("sweep", "vary one parameter -> sweep.csv");
  sweep->add_option("--seeds", opts.seeds, "number of replications");
  sweep->add_option("--policies", opts.policies_csv, "comma list of policies");
  sweep->add_option("--var", opts.var, "sigma_noise|alpha|rho_x|rho_t|ell_x|ell_t")->required();
  sweep->add_option("--values", opts.values_csv, "comma-separated values")->required();

  auto* bench = app.add_subcommand("bench", "runtime comparison quickdraw vs full-history GP");
  bench->add_option("--tmax", opts.tmax_csv, "comma-separated horizons");

  auto* ope = app.add_subcommand("ope", "off-policy evaluation on a logged dataset");
  ope->add_option("--log", opts.log_path, "logged-events CSV (needs ope.schema in config)");
  ope->add_flag("--synthetic", opts.synthetic, "use the built-in synthetic Bernoulli log");
  ope->add_option("--policies", opts.policies_csv, "comma list of target policies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(opts);
    if (sweep->parsed()) return cmd_sweep(opts);
    if (bench->parsed()) return cmd_bench(opts);
    if (ope->parsed()) return cmd_ope(opts);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
