#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qdb/core.hpp"

namespace qdb {


struct GammaMode {
  enum Kind { kFixed, kTheoretical } kind = kFixed;
  double gamma = 2.0;    // fixed mode
  double lipschitz = 1.0;  // theoretical mode: L
  double delta = 0.1;      // theoretical mode: failure probability
};

struct QuickDrawParams {
  double ell_x = 1.0;
  double ell_t = 1.0;  // infinity => stationary mode (time term skipped)
  double rho2 = 1e-7;
  GammaMode gamma_mode;
  // optional truncation of stale observations in nonstationary mode:
  // observations with (t - t_s)/ell_t > c_trunc are dropped from the sums
  std::optional<double> c_trunc;

  bool stationary() const { return std::isinf(ell_t); }

  void validate() const {
    if (!(ell_x > 0.0)) throw std::invalid_argument("quickdraw: ell_x must be positive");
    if (!(ell_t > 0.0)) throw std::invalid_argument("quickdraw: ell_t must be positive");
    if (!(rho2 > 0.0)) throw std::invalid_argument("quickdraw: rho2 must be positive");
    if (gamma_mode.kind == GammaMode::kFixed) {
      if (!(gamma_mode.gamma > 0.0)) throw std::invalid_argument("quickdraw: gamma must be positive");
    } else {
      if (!(gamma_mode.lipschitz > 0.0)) throw std::invalid_argument("quickdraw: L must be positive");
      if (!(gamma_mode.delta > 0.0 && gamma_mode.delta < 1.0))
        throw std::invalid_argument("quickdraw: delta must be in (0,1)");
    }
  }
};

/// Per-arm posterior of the Gaussian-product model at a query time.
struct PosteriorSummary {
  std::vector<double> mu_hat;     // posterior means
  std::vector<double> sigma_hat;  // posterior standard deviations
  double t_query = 0.0;
};

/// Per-observation variance: rho^2 + (D/ell_x)^2 + ((t - t_s)/ell_t)^2.
/// In stationary mode the time term is skipped entirely.
inline double sigma_hat_sq(const QuickDrawParams& params, double dist, double t_query,
                           double t_obs) {
  double v = params.rho2 + (dist / params.ell_x) * (dist / params.ell_x);
  if (!params.stationary()) {
    const double lag = (t_query - t_obs) / params.ell_t;
    v += lag * lag;
  }
  return v;
}

/// Exploration multiplier from the concentration schedule:
/// gamma_T = 2L + 4 C1 ln^2(2 T^2 / delta), C1 = sqrt(rho^2 + 1/ell_x^2)/rho^2.
inline double gamma_schedule(double lipschitz, double delta, long t_round,
                             const QuickDrawParams& params) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("gamma_schedule: delta in (0,1)");
  if (t_round < 1) throw std::invalid_argument("gamma_schedule: T >= 1");
  const double c1 = std::sqrt(params.rho2 + 1.0 / (params.ell_x * params.ell_x)) / params.rho2;
  const double ln = std::log(2.0 * static_cast<double>(t_round) * static_cast<double>(t_round) / delta);
  return 2.0 * lipschitz + 4.0 * c1 * ln * ln;
}

/// Clipped index min(mu + gamma * sigma, 1). `clip` exists for the
/// shift-invariance tests; selection always runs with the ceiling on.
inline std::vector<double> ucb_index(const PosteriorSummary& summary, double gamma,
                                     bool clip = true) {
  std::vector<double> idx(summary.mu_hat.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    double v = summary.mu_hat[i] + gamma * summary.sigma_hat[i];
    if (std::isnan(v)) v = kInfinity;  // mu finite + sigma inf cannot produce NaN; belt only
    idx[i] = clip ? std::min(v, 1.0) : v;
  }
  return idx;
}

namespace detail {
// Kahan-compensated accumulator. The precisions nu_s span 7+ orders of
// magnitude when rho^2 = 1e-7, so naive summation loses the cache-vs-brute
// equivalence at the 1e-12 level.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }
};
}  // namespace detail

/// The Quick-Draw policy. Gaussian-product posterior over arms, clipped UCB
/// index, argmax selection with lowest-index tie-break.
///
/// Stationary mode keeps per-arm running precision sums (an O(1) update and
/// O(K) selection). Nonstationary mode recomputes every precision at the
/// current query time, O(K * t) per round.
class QuickDrawPolicy final : public Policy {
 public:
  QuickDrawPolicy(ArmSpace space, QuickDrawParams params)
      : space_(std::move(space)), params_(params) {
    params_.validate();
    if (params_.stationary()) {
      s_nu_.resize(space_.size());
      s_nuy_.resize(space_.size());
    }
  }

  const QuickDrawParams& params() const { return params_; }
  const std::vector<Observation>& history() const { return history_; }

  void update(const Observation& obs) override {
    if (obs.arm < 0 || obs.arm >= space_.size())
      throw std::runtime_error("quickdraw: observation arm out of range");
    history_.push_back(obs);
    if (params_.stationary()) {
      for (int k = 0; k < space_.size(); ++k) {
        const double d = space_.normalized_distance(k, obs.arm);
        const double nu = 1.0 / sigma_hat_sq(params_, d, 0.0, 0.0);
        s_nu_[k].add(nu);
        s_nuy_[k].add(nu * obs.y);
      }
    }
  }

  /// Posterior per arm at time t_query, exactly the reciprocal-variance sums
  /// over the whole history. Empty history yields the sentinel summary
  /// (mu = 0.5, sigma = +inf); the index layer clips it to 1 everywhere.
  PosteriorSummary posterior(double t_query) const {
    const int k_arms = space_.size();
    PosteriorSummary out;
    out.t_query = t_query;
    out.mu_hat.assign(k_arms, 0.5);
    out.sigma_hat.assign(k_arms, kInfinity);
    if (history_.empty()) return out;

    if (params_.stationary()) {
      for (int k = 0; k < k_arms; ++k) {
        const double sn = s_nu_[k].value();
        out.mu_hat[k] = s_nuy_[k].value() / sn;
        out.sigma_hat[k] = 1.0 / std::sqrt(sn);
      }
      return out;
    }

    for (int k = 0; k < k_arms; ++k) {
      detail::CompensatedSum sn, sny;
      const double xk = space_.coordinate(k);
      for (const Observation& obs : history_) {
        if (params_.c_trunc && (t_query - obs.t) / params_.ell_t > *params_.c_trunc) continue;
        const double d = std::abs(xk - obs.x) / space_.diameter();
        const double nu = 1.0 / sigma_hat_sq(params_, d, t_query, obs.t);
        sn.add(nu);
        sny.add(nu * obs.y);
      }
      if (sn.value() > 0.0) {
        out.mu_hat[k] = sny.value() / sn.value();
        out.sigma_hat[k] = 1.0 / std::sqrt(sn.value());
      }
    }
    return out;
  }

  double gamma_for_round() const {
    if (params_.gamma_mode.kind == GammaMode::kFixed) return params_.gamma_mode.gamma;
    // schedule evaluated at T+1 where T = observations so far
    return gamma_schedule(params_.gamma_mode.lipschitz, params_.gamma_mode.delta,
                          static_cast<long>(history_.size()) + 1, params_);
  }

  PolicyDecision decide(double t, long) override {
    std::vector<double> idx = ucb_index(posterior(t), gamma_for_round());
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
  ArmSpace space_;
  QuickDrawParams params_;
  std::vector<Observation> history_;
  std::vector<detail::CompensatedSum> s_nu_;   // stationary cache: sum of nu_s per arm
  std::vector<detail::CompensatedSum> s_nuy_;  // stationary cache: sum of nu_s * y_s per arm
};

}  // namespace qdb
