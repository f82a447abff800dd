#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qdb/core.hpp"

namespace qdb {

struct GpHyperGrid {
  std::vector<double> lengthscale{0.03, 0.1, 0.3, 1.0};
  std::vector<double> amplitude2{0.25, 1.0};
  std::vector<double> noise2{1e-4, 1e-2};
};

struct GpParams {
  int window = 100;  // <= 0 means unwindowed (full history)
  double lengthscale = 0.1;
  double amplitude2 = 1.0;  // sigma_f^2
  double noise2 = 1e-4;     // rho^2_gp
  double ucb_beta = 4.0;
  bool hyperopt = false;  // grid search maximizing log marginal likelihood
  GpHyperGrid grid;

  void validate() const {
    if (!(lengthscale > 0.0) || !(amplitude2 > 0.0) || !(noise2 > 0.0))
      throw std::invalid_argument("gp: scale parameters must be positive");
    if (!(ucb_beta > 0.0)) throw std::invalid_argument("gp: ucb_beta must be positive");
  }
};

struct GpPosterior {
  std::vector<double> mean;
  std::vector<double> variance;
};

namespace detail {

inline double se_kernel(double x1, double x2, double amplitude2, double lengthscale) {
  const double d = x1 - x2;
  return amplitude2 * std::exp(-d * d / (2.0 * lengthscale * lengthscale));
}

// Cholesky of K + noise2*I with jitter escalation x10 up to 1e-2.
inline Eigen::LLT<Eigen::MatrixXd> factor_kernel(const Eigen::MatrixXd& kmat, double noise2) {
  double jitter = 0.0;
  while (true) {
    Eigen::MatrixXd sys = kmat;
    sys.diagonal().array() += noise2 + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(sys);
    if (llt.info() == Eigen::Success) return llt;
    jitter = jitter == 0.0 ? 1e-8 : jitter * 10.0;
    if (jitter > 1e-2) throw std::runtime_error("gp: kernel matrix not PD after jitter escalation");
  }
}

}  // namespace detail

/// Exact GP regression with a squared-exponential kernel.
/// mean = k^T (K + noise I)^-1 y, var = k(x,x) - k^T (K + noise I)^-1 k,
/// solved through the Cholesky factor of the m x m system.
inline GpPosterior gp_posterior(const GpParams& params, const std::vector<Observation>& window,
                                const std::vector<double>& query_points) {
  params.validate();
  const int m = static_cast<int>(window.size());
  const int q = static_cast<int>(query_points.size());
  GpPosterior out;
  if (m == 0) {
    out.mean.assign(q, 0.0);
    out.variance.assign(q, params.amplitude2);
    return out;
  }

  Eigen::MatrixXd kmat(m, m);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    y(i) = window[i].y;
    for (int j = 0; j <= i; ++j)
      kmat(i, j) = kmat(j, i) =
          detail::se_kernel(window[i].x, window[j].x, params.amplitude2, params.lengthscale);
  }
  Eigen::LLT<Eigen::MatrixXd> llt = detail::factor_kernel(kmat, params.noise2);
  Eigen::VectorXd alpha = llt.solve(y);

  Eigen::MatrixXd kq(m, q);
  for (int j = 0; j < q; ++j)
    for (int i = 0; i < m; ++i)
      kq(i, j) = detail::se_kernel(window[i].x, query_points[j], params.amplitude2,
                                   params.lengthscale);

  Eigen::VectorXd mean = kq.transpose() * alpha;
  // var = k(x,x) - ||L^-1 k||^2
  Eigen::MatrixXd v = llt.matrixL().solve(kq);
  out.mean.assign(mean.data(), mean.data() + q);
  out.variance.resize(q);
  for (int j = 0; j < q; ++j)
    out.variance[j] = std::max(0.0, params.amplitude2 - v.col(j).squaredNorm());
  return out;
}

/// Gaussian log marginal likelihood of the window under the kernel.
inline double gp_log_marginal(const GpParams& params, const std::vector<Observation>& window) {
  const int m = static_cast<int>(window.size());
  if (m == 0) return 0.0;
  Eigen::MatrixXd kmat(m, m);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    y(i) = window[i].y;
    for (int j = 0; j <= i; ++j)
      kmat(i, j) = kmat(j, i) =
          detail::se_kernel(window[i].x, window[j].x, params.amplitude2, params.lengthscale);
  }
  Eigen::LLT<Eigen::MatrixXd> llt = detail::factor_kernel(kmat, params.noise2);
  Eigen::VectorXd alpha = llt.solve(y);
  double logdet = 0.0;
  for (int i = 0; i < m; ++i) logdet += std::log(llt.matrixL()(i, i));
  return -0.5 * y.dot(alpha) - logdet - 0.5 * m * std::log(2.0 * M_PI);
}

/// SW-GP-UCB: exact GP on a sliding window, index = mean + sqrt(beta) * std.
/// With hyperopt on, kernel parameters are refit each round by grid search
/// over the log marginal likelihood of the window.
class SwGpUcbPolicy final : public Policy {
 public:
  SwGpUcbPolicy(ArmSpace space, GpParams params)
      : space_(std::move(space)), params_(params) {
    params_.validate();
  }

  void update(const Observation& obs) override {
    window_.push_back(obs);
    if (params_.window > 0)
      while (static_cast<int>(window_.size()) > params_.window) window_.pop_front();
  }

  const GpParams& fitted_params() const { return params_; }

  PolicyDecision decide(double, long) override {
    std::vector<Observation> win(window_.begin(), window_.end());
    if (params_.hyperopt && !win.empty()) refit(win);
    GpPosterior post = gp_posterior(params_, win, space_.coordinates());
    std::vector<double> idx(space_.size());
    const double root_beta = std::sqrt(params_.ucb_beta);
    for (int i = 0; i < space_.size(); ++i)
      idx[i] = post.mean[i] + root_beta * std::sqrt(post.variance[i]);
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
  void refit(const std::vector<Observation>& win) {
    double best_lml = -std::numeric_limits<double>::infinity();
    GpParams best = params_;
    for (double ls : params_.grid.lengthscale)
      for (double a2 : params_.grid.amplitude2)
        for (double n2 : params_.grid.noise2) {
          GpParams cand = params_;
          cand.lengthscale = ls;
          cand.amplitude2 = a2;
          cand.noise2 = n2;
          const double lml = gp_log_marginal(cand, win);
          if (lml > best_lml) {
            best_lml = lml;
            best = cand;
          }
        }
    params_ = best;
  }

  ArmSpace space_;
  GpParams params_;
  std::deque<Observation> window_;
};

}  // namespace qdb
