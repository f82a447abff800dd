#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdb/config.hpp"
#include "qdb/envgen.hpp"

namespace qdb {

struct ExperimentConfig {
  FieldParams field;
  std::vector<PolicySpec> policies;
  int warmup_rounds = 100;
  int n_seeds = 20;
  std::uint64_t seed_base = 0;

  void validate() const {
    field.validate();
    if (warmup_rounds < 0 || warmup_rounds >= field.t_rounds)
      throw std::invalid_argument("config: warmup_rounds must be in [0, T)");
    if (n_seeds < 1) throw std::invalid_argument("config: n_seeds >= 1 required");
    if (policies.empty()) throw std::invalid_argument("config: at least one policy required");
  }
};

struct RunResult {
  std::vector<int> arms;        // chosen arm per round
  std::vector<double> rewards;  // observed (noisy) payout per round
  std::vector<double> regrets;  // against the stored mean grid
  double cum_regret = 0.0;      // post-warm-up cumulative regret
  double mean_regret = 0.0;     // cum_regret / post-warm-up rounds
  double wall_seconds = 0.0;    // time spent inside the policy (decide + update)
};

/// Plays oracle_best each round; cumulative regret is identically zero.
/// Harness-side reference policy, not part of the bandit contract.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const PayoutField& field) : field_(&field) {}

  void update(const Observation&) override {}

  PolicyDecision decide(double, long round) override {
    return {oracle_best(*field_, round).first, std::nullopt};
  }

  std::vector<double> action_probs(double t, long round) override {
    std::vector<double> p(field_->space.size(), 0.0);
    p[decide(t, round).arm] = 1.0;
    return p;
  }

  const ArmSpace& space() const override { return field_->space; }

 private:
  const PayoutField* field_;
};

/// One rollout. The warm-up arm sequence and the field are functions of the
/// run seed alone, so every policy compared at a given seed faces identical
/// conditions; observation noise is keyed by (seed, policy, round).
inline RunResult run_once(const PayoutField& field, Policy& policy, const std::string& policy_name,
                          std::uint64_t seed, int warmup_rounds) {
  const long t_rounds = field.params.t_rounds;
  Rng warmup_rng(hash_combine(seed, hash_str("warmup")));
  const std::uint64_t noise_label = hash_str(policy_name);

  RunResult result;
  result.arms.reserve(t_rounds);
  result.rewards.reserve(t_rounds);
  result.regrets.reserve(t_rounds);

  using clock = std::chrono::steady_clock;
  std::chrono::nanoseconds policy_time{0};

  for (long round = 1; round <= t_rounds; ++round) {
    const double t_now = field.round_time(round);
    int arm;
    if (round <= warmup_rounds) {
      arm = warmup_rng.next_int(field.space.size());
    } else {
      const auto t0 = clock::now();
      arm = policy.decide(t_now, round).arm;
      policy_time += clock::now() - t0;
    }

    Rng noise(hash_combine(hash_combine(seed, noise_label), static_cast<std::uint64_t>(round)));
    const double y = observe(field, arm, round, noise);
    const Observation obs{arm, field.space.coordinate(arm), t_now, y};
    {
      const auto t0 = clock::now();
      policy.update(obs);
      policy_time += clock::now() - t0;
    }

    const double best = oracle_best(field, round).second;
    const double regret = best - field.mu(arm, round - 1);
    result.arms.push_back(arm);
    result.rewards.push_back(y);
    result.regrets.push_back(regret);
    if (round > warmup_rounds) result.cum_regret += regret;
  }
  const long post = t_rounds - warmup_rounds;
  result.mean_regret = post > 0 ? result.cum_regret / static_cast<double>(post) : 0.0;
  result.wall_seconds = std::chrono::duration<double>(policy_time).count();
  return result;
}

inline PayoutField field_for_seed(FieldParams params, std::uint64_t seed) {
  params.seed = seed;
  return sample_field(params);
}

struct EnsembleRow {
  std::string policy;
  std::uint64_t seed = 0;
  double mean_regret = 0.0;
  double wall_seconds = 0.0;
};

struct EnsembleSummary {
  std::string policy;
  double mean = 0.0;
  double stddev = 0.0;  // sample std over seeds; 0 when n_seeds == 1
  int n = 0;
};

struct EnsembleResult {
  std::vector<EnsembleRow> rows;
  std::vector<EnsembleSummary> summaries;

  const EnsembleSummary& summary(const std::string& policy) const {
    for (const EnsembleSummary& s : summaries)
      if (s.policy == policy) return s;
    throw std::out_of_range("no summary for policy " + policy);
  }
};

inline std::vector<EnsembleSummary> summarize(const std::vector<EnsembleRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> by_policy;
  for (const EnsembleRow& r : rows) {
    if (!by_policy.count(r.policy)) order.push_back(r.policy);
    by_policy[r.policy].push_back(r.mean_regret);
  }
  std::vector<EnsembleSummary> out;
  for (const std::string& name : order) {
    const std::vector<double>& v = by_policy[name];
    EnsembleSummary s;
    s.policy = name;
    s.n = static_cast<int>(v.size());
    for (double x : v) s.mean += x;
    s.mean /= s.n;
    if (s.n > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - s.mean) * (x - s.mean);
      s.stddev = std::sqrt(ss / (s.n - 1));
    }
    out.push_back(s);
  }
  return out;
}

/// Ensemble over seeds seed_base .. seed_base + n_seeds - 1. Seeds are
/// independent replications; `jobs > 1` runs them on worker threads with the
/// output order fixed by (seed, policy) index.
inline EnsembleResult run_ensemble(const ExperimentConfig& config, int jobs = 1) {
  config.validate();
  EnsembleResult result;
  result.rows.resize(static_cast<std::size_t>(config.n_seeds) * config.policies.size());

  auto run_seed = [&](int i) {
    const std::uint64_t seed = config.seed_base + static_cast<std::uint64_t>(i);
    const PayoutField field = field_for_seed(config.field, hash_combine(seed, hash_str("field")));
    for (std::size_t p = 0; p < config.policies.size(); ++p) {
      const PolicySpec& spec = config.policies[p];
      auto policy = make_policy(spec, field.space, hash_combine(seed, hash_str(spec.name)));
      RunResult run = run_once(field, *policy, spec.name, seed, config.warmup_rounds);
      result.rows[i * config.policies.size() + p] = {spec.name, seed, run.mean_regret,
                                                     run.wall_seconds};
    }
  };

  if (jobs <= 1) {
    for (int i = 0; i < config.n_seeds; ++i) run_seed(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < std::min(jobs, config.n_seeds); ++w)
      workers.emplace_back([&] {
        for (int i = next.fetch_add(1); i < config.n_seeds; i = next.fetch_add(1)) run_seed(i);
      });
    for (std::thread& t : workers) t.join();
  }
  result.summaries = summarize(result.rows);
  return result;
}

struct SweepRow {
  std::string variable;
  double value = 0.0;
  std::string policy;
  double mean_regret = 0.0;
  double stddev = 0.0;
};

/// Apply a sweep variable. Field variables change the environment; ell_x and
/// ell_t change every quickdraw policy in the set.
inline ExperimentConfig with_sweep_value(ExperimentConfig config, const std::string& variable,
                                         double value) {
  if (variable == "sigma_noise") {
    config.field.sigma_noise = value;
  } else if (variable == "alpha") {
    config.field.alpha = value;
  } else if (variable == "rho_x") {
    config.field.rho_x = value;
  } else if (variable == "rho_t") {
    config.field.rho_t = value;
  } else if (variable == "ell_x" || variable == "ell_t") {
    for (PolicySpec& spec : config.policies)
      if (spec.name == "quickdraw") spec.params[variable] = value;
  } else {
    throw std::invalid_argument("unknown sweep variable: " + variable);
  }
  return config;
}

inline std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const std::string& variable,
                                       const std::vector<double>& values, int jobs = 1) {
  if (values.empty()) throw std::invalid_argument("sweep: empty values list");
  std::vector<SweepRow> rows;
  for (double value : values) {
    EnsembleResult ens = run_ensemble(with_sweep_value(config, variable, value), jobs);
    for (const EnsembleSummary& s : ens.summaries)
      rows.push_back({variable, value, s.policy, s.mean, s.stddev});
  }
  return rows;
}

struct BenchRow {
  std::string policy;
  long t_rounds = 0;
  double cumulative_seconds = 0.0;
};

/// Cumulative policy runtime on a stationary field: cached Quick-Draw vs an
/// exact GP run unwindowed on the full history.
inline std::vector<BenchRow> bench_runtime(const std::vector<long>& t_values, int k_arms = 100,
                                           std::uint64_t seed = 17, int warmup_rounds = 10) {
  std::vector<BenchRow> rows;
  for (long t : t_values) {
    FieldParams fp;
    fp.k_arms = k_arms;
    fp.t_rounds = t;
    fp.rho_t = kInfinity;
    fp.sigma_noise = 0.1;
    const PayoutField field = field_for_seed(fp, hash_combine(seed, hash_str("field")));

    QuickDrawParams qp;
    qp.ell_t = kInfinity;
    QuickDrawPolicy qd(field.space, qp);
    rows.push_back({"quickdraw", t, run_once(field, qd, "quickdraw", seed, warmup_rounds).wall_seconds});

    GpParams gp;
    gp.window = 0;  // full history
    gp.hyperopt = false;
    SwGpUcbPolicy gppol(field.space, gp);
    rows.push_back({"gp_full", t, run_once(field, gppol, "gp_full", seed, warmup_rounds).wall_seconds});
  }
  return rows;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::domain_error("loglog_slope: nonpositive sample");
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Largest adjacent-cell spatial finite difference of the mean grid, in
// normalized-distance units. Stands in for the unobservable Lipschitz
// constant when running the theoretical gamma schedule.
inline double empirical_lipschitz(const PayoutField& field) {
  double l = 0.0;
  const int k = static_cast<int>(field.mu.rows());
  if (k < 2) return 1.0;
  const double d = field.space.normalized_distance(0, 1);
  for (long r = 0; r < field.mu.cols(); ++r)
    for (int i = 0; i + 1 < k; ++i)
      l = std::max(l, std::abs(field.mu(i + 1, r) - field.mu(i, r)) / d);
  return l;
}

struct RegretScalingResult {
  bool skipped = false;  // degenerate (nonpositive) regrets
  double slope = 0.0;
  std::vector<double> t_values;
  std::vector<double> mean_cum_regret;
};

/// Cumulative-regret growth exponent on stationary fields: ensemble mean of
/// R_T for each horizon, then a log-log slope fit.
template <typename PolicyFactory>
inline RegretScalingResult regret_scaling(const std::vector<long>& t_values, int n_seeds,
                                          std::uint64_t seed_base, int k_arms, int warmup_rounds,
                                          double sigma_noise, PolicyFactory make,
                                          const std::string& policy_name) {
  RegretScalingResult out;
  for (long t : t_values) {
    double total = 0.0;
    for (int i = 0; i < n_seeds; ++i) {
      const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(i);
      FieldParams fp;
      fp.k_arms = k_arms;
      fp.t_rounds = t + warmup_rounds;  // t counts evaluated (post-warm-up) rounds
      fp.rho_t = kInfinity;
      fp.sigma_noise = sigma_noise;
      const PayoutField field = field_for_seed(fp, hash_combine(seed, hash_str("field")));
      std::unique_ptr<Policy> policy = make(field, seed);
      total += run_once(field, *policy, policy_name, seed, warmup_rounds).cum_regret;
    }
    out.t_values.push_back(static_cast<double>(t));
    out.mean_cum_regret.push_back(total / n_seeds);
  }
  for (double r : out.mean_cum_regret)
    if (!(r > 0.0)) {
      out.skipped = true;
      return out;
    }
  out.slope = loglog_slope(out.t_values, out.mean_cum_regret);
  return out;
}

// ---- CSV emission ----------------------------------------------------------

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline void write_ensemble_csv(std::ostream& os, const std::vector<EnsembleRow>& rows) {
  os << "policy,seed,mean_regret,wall_time\n";
  for (const EnsembleRow& r : rows)
    os << r.policy << ',' << r.seed << ',' << format_double(r.mean_regret) << ','
       << format_double(r.wall_seconds) << '\n';
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "variable,value,policy,mean_regret,std\n";
  for (const SweepRow& r : rows)
    os << r.variable << ',' << format_double(r.value) << ',' << r.policy << ','
       << format_double(r.mean_regret) << ',' << format_double(r.stddev) << '\n';
}

inline void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "policy,T,cumulative_seconds\n";
  for (const BenchRow& r : rows)
    os << r.policy << ',' << r.t_rounds << ',' << format_double(r.cumulative_seconds) << '\n';
}

inline void write_trace_csv(std::ostream& os, const PayoutField& field, const RunResult& run) {
  os << "round,t,arm,y,regret\n";
  for (std::size_t i = 0; i < run.arms.size(); ++i) {
    const long round = static_cast<long>(i) + 1;
    os << round << ',' << format_double(field.round_time(round)) << ',' << run.arms[i] << ','
       << format_double(run.rewards[i]) << ',' << format_double(run.regrets[i]) << '\n';
  }
}

inline std::vector<EnsembleRow> parse_ensemble_csv(std::istream& is) {
  std::vector<EnsembleRow> rows;
  std::string line;
  if (!std::getline(is, line) || line != "policy,seed,mean_regret,wall_time")
    throw std::runtime_error("ensemble csv: bad header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    EnsembleRow r;
    std::string field;
    std::getline(ls, r.policy, ',');
    std::getline(ls, field, ',');
    r.seed = std::stoull(field);
    std::getline(ls, field, ',');
    r.mean_regret = std::stod(field);
    std::getline(ls, field, ',');
    r.wall_seconds = std::stod(field);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace qdb
