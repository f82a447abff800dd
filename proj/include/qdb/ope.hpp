#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdb/config.hpp"
#include "qdb/core.hpp"
#include "qdb/rng.hpp"

namespace qdb {

/// One logged bandit interaction.
struct LoggedEvent {
  double timestamp = 0.0;
  int action = 0;
  double reward = 0.0;
  double pscore = 1.0;  // logging propensity, > 0
  std::vector<int> user_features;
  double item_feature = 0.0;  // raw numerical product feature
};

struct SchemaMapping {
  std::string timestamp = "timestamp";
  std::string action = "action";
  std::string reward = "reward";
  std::string pscore = "pscore";
  std::string item_feature = "item_feature";
  std::vector<std::string> user_features;
};

struct IngestReport {
  std::vector<LoggedEvent> events;
  std::vector<std::string> rejected;  // "line N: reason"
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ls(line);
  while (std::getline(ls, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace detail

/// Parse a headered CSV of logged events. Rows with pscore <= 0, missing or
/// unparseable fields are rejected with line numbers; more than 1% bad rows
/// is a hard failure.
inline IngestReport ingest_log(std::istream& is, const SchemaMapping& schema) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("ingest: empty file");
  std::vector<std::string> header = detail::split_csv_line(line);
  std::map<std::string, int> col;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) col[header[i]] = i;

  auto require = [&](const std::string& name) {
    auto it = col.find(name);
    if (it == col.end()) throw std::runtime_error("ingest: missing column: " + name);
    return it->second;
  };
  const int c_ts = require(schema.timestamp);
  const int c_action = require(schema.action);
  const int c_reward = require(schema.reward);
  const int c_pscore = require(schema.pscore);
  const int c_item = require(schema.item_feature);
  std::vector<int> c_user;
  for (const std::string& name : schema.user_features) c_user.push_back(require(name));

  IngestReport report;
  long total = 0;
  long line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++total;
    std::vector<std::string> cells = detail::split_csv_line(line);
    try {
      LoggedEvent ev;
      auto cell = [&](int c) -> const std::string& {
        if (c >= static_cast<int>(cells.size())) throw std::runtime_error("missing field");
        if (cells[c].empty()) throw std::runtime_error("missing field");
        return cells[c];
      };
      ev.timestamp = std::stod(cell(c_ts));
      ev.action = std::stoi(cell(c_action));
      ev.reward = std::stod(cell(c_reward));
      ev.pscore = std::stod(cell(c_pscore));
      ev.item_feature = std::stod(cell(c_item));
      for (int c : c_user) ev.user_features.push_back(std::stoi(cell(c)));
      if (ev.pscore <= 0.0) throw std::runtime_error("pscore <= 0");
      if (ev.action < 0) throw std::runtime_error("negative action");
      report.events.push_back(std::move(ev));
    } catch (const std::exception& e) {
      report.rejected.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (total > 0 && static_cast<double>(report.rejected.size()) > 0.01 * total)
    throw std::runtime_error("ingest: more than 1% bad rows (" +
                             std::to_string(report.rejected.size()) + "/" + std::to_string(total) + ")");
  return report;
}

inline IngestReport ingest_log(const std::string& path, const SchemaMapping& schema) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("ingest: cannot open " + path);
  return ingest_log(f, schema);
}

/// Time-ordered events of one user-feature group, with the arm space built
/// from the distinct rescaled item features and time rescaled to [0, 1].
struct ReplaySegment {
  std::vector<LoggedEvent> events;  // sorted by timestamp; item/time already rescaled
  ArmSpace arm_space = ArmSpace::uniform_grid(1);
  std::vector<int> event_arm;              // arm index per event
  std::vector<std::size_t> interval_ends;  // exclusive end offset of each replay interval
  std::vector<int> feature_key;
};

inline constexpr std::size_t kReplayIntervalLength = 1000;

/// One segment per distinct user-feature tuple; within a segment events are
/// time-sorted, item features are mapped onto [-1, 1], time onto [0, 1], and
/// interval boundaries (policy state resets) are marked every 1000 events.
/// Segments with fewer than two distinct item features are skipped.
inline std::vector<ReplaySegment> segment(const std::vector<LoggedEvent>& events,
                                          std::vector<std::string>* notices = nullptr) {
  std::map<std::vector<int>, std::vector<LoggedEvent>> groups;
  for (const LoggedEvent& ev : events) groups[ev.user_features].push_back(ev);

  double t_min = 0.0, t_max = 1.0;
  if (!events.empty()) {
    t_min = events.front().timestamp;
    t_max = events.front().timestamp;
    for (const LoggedEvent& ev : events) {
      t_min = std::min(t_min, ev.timestamp);
      t_max = std::max(t_max, ev.timestamp);
    }
  }
  const double t_span = t_max > t_min ? t_max - t_min : 1.0;

  std::vector<ReplaySegment> out;
  for (auto& [key, evs] : groups) {
    std::stable_sort(evs.begin(), evs.end(),
                     [](const LoggedEvent& a, const LoggedEvent& b) { return a.timestamp < b.timestamp; });

    // distinct item features, one arm per feature value
    std::map<double, int> feat_to_arm;
    for (const LoggedEvent& ev : evs) feat_to_arm.emplace(ev.item_feature, 0);
    if (feat_to_arm.size() < 2) {
      if (notices)
        notices->push_back("segment with " + std::to_string(feat_to_arm.size()) +
                           " distinct item feature(s) skipped");
      continue;
    }
    const double f_min = feat_to_arm.begin()->first;
    const double f_max = feat_to_arm.rbegin()->first;
    std::vector<double> coords;
    {
      int idx = 0;
      for (auto& [feat, arm] : feat_to_arm) {
        arm = idx++;
        coords.push_back(-1.0 + 2.0 * (feat - f_min) / (f_max - f_min));
      }
    }

    ReplaySegment seg;
    seg.feature_key = key;
    seg.arm_space = ArmSpace(coords, 2.0);
    for (LoggedEvent ev : evs) {
      seg.event_arm.push_back(feat_to_arm.at(ev.item_feature));
      ev.item_feature = seg.arm_space.coordinate(seg.event_arm.back());
      ev.timestamp = (ev.timestamp - t_min) / t_span;
      seg.events.push_back(std::move(ev));
    }
    for (std::size_t end = kReplayIntervalLength; end < seg.events.size();
         end += kReplayIntervalLength)
      seg.interval_ends.push_back(end);
    seg.interval_ends.push_back(seg.events.size());
    out.push_back(std::move(seg));
  }
  return out;
}

struct IpsResult {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> per_trial;
};

struct IpsOptions {
  int n_trials = 10;
  std::uint64_t seed = 0;
  double max_weight = 0.0;  // > 0 enables importance-weight clipping
};

/// Inverse-propensity value estimate of a target policy on logged segments.
/// Replays each interval with a fresh policy instance: at every event the
/// policy's action distribution is queried, the IPS term
/// pi_t(a_log) / pscore * reward is accumulated, and the policy is then
/// updated with the logged observation regardless of whether it matched.
inline IpsResult ips_evaluate(const PolicySpec& spec, const std::vector<ReplaySegment>& segments,
                              const IpsOptions& opts = {}) {
  IpsResult out;
  for (int trial = 0; trial < opts.n_trials; ++trial) {
    double sum = 0.0;
    long n_events = 0;
    for (std::size_t si = 0; si < segments.size(); ++si) {
      const ReplaySegment& seg = segments[si];
      std::size_t begin = 0;
      for (std::size_t end : seg.interval_ends) {
        auto policy = make_policy(
            spec, seg.arm_space,
            hash_combine(hash_combine(opts.seed, static_cast<std::uint64_t>(trial)),
                         hash_combine(static_cast<std::uint64_t>(si), hash_str(spec.name))));
        long round = 0;
        for (std::size_t i = begin; i < end; ++i) {
          const LoggedEvent& ev = seg.events[i];
          ++round;
          const std::vector<double> probs = policy->action_probs(ev.timestamp, round);
          double w = probs[seg.event_arm[i]] / ev.pscore;
          if (opts.max_weight > 0.0) w = std::min(w, opts.max_weight);
          sum += w * ev.reward;
          ++n_events;
          policy->update(Observation{seg.event_arm[i], seg.events[i].item_feature, ev.timestamp,
                                     ev.reward});
        }
        begin = end;
      }
    }
    out.per_trial.push_back(n_events > 0 ? sum / static_cast<double>(n_events) : 0.0);
  }
  for (double v : out.per_trial) out.mean += v;
  out.mean /= out.per_trial.size();
  if (out.per_trial.size() > 1) {
    double ss = 0.0;
    for (double v : out.per_trial) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / (out.per_trial.size() - 1));
  }
  return out;
}

/// Synthetic uniform-logging Bernoulli log: desk-scale stand-in for a real
/// logged dataset. `mean_fn(arm, t01)` gives the click probability with t
/// already rescaled to [0, 1]; pscore is exactly 1/K.
inline std::vector<LoggedEvent> synth_log(int k_arms, long n_events,
                                          const std::function<double(int, double)>& mean_fn,
                                          std::uint64_t seed) {
  if (k_arms < 1 || n_events < 0) throw std::invalid_argument("synth_log: bad sizes");
  Rng rng(hash_combine(seed, hash_str("synth_log")));
  const ArmSpace space = ArmSpace::uniform_grid(k_arms);
  std::vector<LoggedEvent> events;
  events.reserve(n_events);
  for (long i = 0; i < n_events; ++i) {
    const double t01 = n_events > 1 ? static_cast<double>(i) / static_cast<double>(n_events - 1) : 0.0;
    LoggedEvent ev;
    ev.timestamp = t01;
    ev.action = rng.next_int(k_arms);
    const double p = mean_fn(ev.action, t01);
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("synth_log: mean outside [0,1]");
    ev.reward = rng.next_double() < p ? 1.0 : 0.0;
    ev.pscore = 1.0 / k_arms;
    ev.user_features = {0};
    ev.item_feature = space.coordinate(ev.action);
    events.push_back(std::move(ev));
  }
  return events;
}

inline void write_log_csv(std::ostream& os, const std::vector<LoggedEvent>& events) {
  os << "timestamp,action,reward,pscore,item_feature,user_feature_0\n";
  for (const LoggedEvent& ev : events) {
    std::ostringstream row;
    row.precision(17);
    row << ev.timestamp << ',' << ev.action << ',' << ev.reward << ',' << ev.pscore << ','
        << ev.item_feature << ',' << (ev.user_features.empty() ? 0 : ev.user_features[0]);
    os << row.str() << '\n';
  }
}

}  // namespace qdb
