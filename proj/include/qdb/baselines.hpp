#pragma once

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qdb/core.hpp"

namespace qdb {

struct SlidingGreedyParams {
  double epsilon = 0.1;
  int window = 100;

  void validate() const {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("greedy: epsilon in [0,1]");
    if (window < 1) throw std::invalid_argument("greedy: window >= 1");
  }
};

/// epsilon-greedy over a sliding window: with probability epsilon a uniform
/// random arm, otherwise the arm of the highest observed payout in the
/// window (ties to the most recent observation).
class SlidingGreedyPolicy final : public Policy {
 public:
  SlidingGreedyPolicy(ArmSpace space, SlidingGreedyParams params, std::uint64_t seed)
      : space_(std::move(space)), params_(params), rng_(seed) {
    params_.validate();
  }

  void update(const Observation& obs) override {
    window_.push_back(obs);
    while (static_cast<int>(window_.size()) > params_.window) window_.pop_front();
  }

  int exploit_arm() const {
    int best = -1;
    double best_y = 0.0;
    for (const Observation& obs : window_) {  // front = oldest; >= keeps the most recent max
      if (best < 0 || obs.y >= best_y) {
        best = obs.arm;
        best_y = obs.y;
      }
    }
    return best;
  }

  PolicyDecision decide(double, long) override {
    const int k = space_.size();
    if (rng_.next_double() < params_.epsilon) return {rng_.next_int(k), std::nullopt};
    const int arm = exploit_arm();
    if (arm < 0) return {rng_.next_int(k), std::nullopt};  // empty window
    return {arm, std::nullopt};
  }

  std::vector<double> action_probs(double, long) override {
    const int k = space_.size();
    const int arm = exploit_arm();
    if (arm < 0) return std::vector<double>(k, 1.0 / k);
    std::vector<double> p(k, params_.epsilon / k);
    p[arm] += 1.0 - params_.epsilon;
    return p;
  }

  const ArmSpace& space() const override { return space_; }

 private:
  ArmSpace space_;
  SlidingGreedyParams params_;
  Rng rng_;
  std::deque<Observation> window_;
};

struct RestlessParams {
  double sigma_r = 1.0;  // drift scale of the suspicion index

  void validate() const {
    if (!(sigma_r > 0.0)) throw std::invalid_argument("restless: sigma_r must be positive");
  }
};

/// Restless bandit: even rounds play the leader (arm with the highest last
/// observed payout), odd rounds pick uniformly among arms whose suspicion
/// y_j + sigma_r * sqrt(dt) - y_l exceeds zero. Arms never observed count
/// as infinite suspicion on exploration rounds.
class RestlessPolicy final : public Policy {
 public:
  RestlessPolicy(ArmSpace space, RestlessParams params, std::uint64_t seed)
      : space_(std::move(space)), params_(params), rng_(seed),
        last_y_(space_.size()), last_t_(space_.size()), seen_(space_.size(), false) {
    params_.validate();
  }

  void update(const Observation& obs) override {
    last_y_[obs.arm] = obs.y;
    last_t_[obs.arm] = obs.t;
    seen_[obs.arm] = true;
  }

  double suspicion(int arm, double t_now, double leader_y) const {
    return last_y_[arm] + params_.sigma_r * std::sqrt(std::max(0.0, t_now - last_t_[arm])) -
           leader_y;
  }

  double suspicion(int arm, double t_now) const { return suspicion(arm, t_now, last_y_[leader_arm()]); }

  // ties on last payout (pervasive with 0/1 rewards) go to the freshest observation
  int leader_arm() const {
    int best = -1;
    for (int i = 0; i < space_.size(); ++i) {
      if (!seen_[i]) continue;
      if (best < 0 || last_y_[i] > last_y_[best] ||
          (last_y_[i] == last_y_[best] && last_t_[i] > last_t_[best]))
        best = i;
    }
    return best;
  }

  PolicyDecision decide(double t, long round) override {
    const int leader = leader_arm();
    if (leader < 0) return {rng_.next_int(space_.size()), std::nullopt};
    if (round % 2 == 0) return {leader, std::nullopt};

    const double y_l = last_y_[leader];
    std::vector<int> candidates;
    for (int i = 0; i < space_.size(); ++i) {
      if (!seen_[i]) {
        candidates.push_back(i);  // unobserved: suspicion treated as +inf
      } else if (i != leader && suspicion(i, t, y_l) > 0.0) {
        candidates.push_back(i);
      }
    }
    if (candidates.empty()) return {leader, std::nullopt};
    return {candidates[rng_.next_int(static_cast<int>(candidates.size()))], std::nullopt};
  }

  std::vector<double> action_probs(double t, long round) override {
    const int k = space_.size();
    std::vector<double> p(k, 0.0);
    const int leader = leader_arm();
    if (leader < 0) return std::vector<double>(k, 1.0 / k);
    if (round % 2 == 0) {
      p[leader] = 1.0;
      return p;
    }
    const double y_l = last_y_[leader];
    std::vector<int> candidates;
    for (int i = 0; i < k; ++i)
      if (!seen_[i] || (i != leader && suspicion(i, t, y_l) > 0.0)) candidates.push_back(i);
    if (candidates.empty()) {
      p[leader] = 1.0;
    } else {
      for (int c : candidates) p[c] = 1.0 / candidates.size();
    }
    return p;
  }

  const ArmSpace& space() const override { return space_; }

 private:
  ArmSpace space_;
  RestlessParams params_;
  Rng rng_;
  std::vector<double> last_y_;
  std::vector<double> last_t_;
  std::vector<bool> seen_;
};

struct SlidingUcbParams {
  int window = 100;
  double xi = 0.5;
  double reward_bound = 1.0;  // B

  void validate() const {
    if (window < 1) throw std::invalid_argument("sliding_ucb: window >= 1");
    if (!(xi > 0.0)) throw std::invalid_argument("sliding_ucb: xi must be positive");
  }
};

/// Sliding-window UCB-1: forced exploration of unplayed arms first, then
/// argmax of windowed mean + B sqrt(xi log t / n). With K comparable to the
/// horizon it never leaves forced exploration, reproducing random-level play.
class SlidingUcbPolicy final : public Policy {
 public:
  SlidingUcbPolicy(ArmSpace space, SlidingUcbParams params)
      : space_(std::move(space)), params_(params) {
    params_.validate();
  }

  void update(const Observation& obs) override {
    window_.push_back(obs);
    while (static_cast<int>(window_.size()) > params_.window) window_.pop_front();
  }

  std::vector<double> indices(long round) const {
    const int k = space_.size();
    std::vector<double> n(k, 0.0), sum(k, 0.0);
    for (const Observation& obs : window_) {
      n[obs.arm] += 1.0;
      sum[obs.arm] += obs.y;
    }
    std::vector<double> idx(k);
    const double logt = std::log(std::max<double>(2, round));
    for (int i = 0; i < k; ++i) {
      idx[i] = n[i] == 0.0
                   ? kUnseen
                   : sum[i] / n[i] + params_.reward_bound * std::sqrt(params_.xi * logt / n[i]);
    }
    return idx;
  }

  PolicyDecision decide(double, long round) override {
    std::vector<double> idx = indices(round);
    // forced exploration: lowest-index arm with no window observations
    for (int i = 0; i < space_.size(); ++i)
      if (idx[i] == kUnseen) return {i, std::nullopt};
    PolicyDecision d;
    d.arm = argmax_lowest(idx);
    d.index_values = std::move(idx);
    return d;
  }

  std::vector<double> action_probs(double t, long round) override {
    std::vector<double> p(space_.size(), 0.0);
    p[decide(t, round).arm] = 1.0;
    return p;
  }

  const ArmSpace& space() const override { return space_; }

 private:
  static constexpr double kUnseen = std::numeric_limits<double>::infinity();

  ArmSpace space_;
  SlidingUcbParams params_;
  std::deque<Observation> window_;
};

}  // namespace qdb
