#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qdb/core.hpp"
#include "qdb/rng.hpp"

namespace qdb {

struct FieldParams {
  double rho_x = 0.1;        // spatial correlation length
  double rho_t = 0.1;        // temporal correlation length; infinity => stationary field
  double alpha = 1.0;        // sharpness power, >= 1
  double sigma_noise = 0.0;  // observation noise std
  int k_arms = 1000;
  long t_rounds = 1000;
  double tau_s = 1e-3;  // round spacing; round r happens at t = r * tau_s
  std::uint64_t seed = 0;

  bool stationary() const { return std::isinf(rho_t); }

  void validate() const {
    if (!(rho_x > 0.0)) throw std::invalid_argument("field: rho_x must be positive");
    if (!(rho_t > 0.0)) throw std::invalid_argument("field: rho_t must be positive");
    if (!(alpha >= 1.0)) throw std::invalid_argument("field: alpha must be >= 1");
    if (sigma_noise < 0.0) throw std::invalid_argument("field: sigma_noise must be >= 0");
    if (k_arms < 1 || t_rounds < 1) throw std::invalid_argument("field: K, T >= 1 required");
    if (!(tau_s > 0.0)) throw std::invalid_argument("field: tau_s must be positive");
  }
};

/// Mean payout grid mu(x, t) in [0,1], K arms by T rounds. The simulation
/// oracle: regret is always accounted against this grid, never against
/// noisy observations.
struct PayoutField {
  Eigen::MatrixXd mu;  // K x T
  FieldParams params;
  ArmSpace space = ArmSpace::uniform_grid(1);

  double round_time(long round) const { return static_cast<double>(round) * params.tau_s; }
};

namespace detail {

inline Eigen::MatrixXd se_covariance(const std::vector<double>& pts, double corr_len) {
  const int n = static_cast<int>(pts.size());
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double d = pts[i] - pts[j];
      c(i, j) = c(j, i) = std::exp(-d * d / (2.0 * corr_len * corr_len));
    }
  return c;
}

// Cholesky square root with jitter escalation. The squared-exponential
// covariance is numerically rank-deficient at these sizes, so the factor
// only exists after regularization.
inline Eigen::MatrixXd cholesky_sqrt(Eigen::MatrixXd c) {
  double jitter = 1e-10;
  for (int attempt = 0; attempt < 3; ++attempt) {
    Eigen::MatrixXd reg = c + jitter * Eigen::MatrixXd::Identity(c.rows(), c.cols());
    Eigen::LLT<Eigen::MatrixXd> llt(reg);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    jitter *= 10.0;
  }
  throw std::runtime_error("field: covariance factorization failed after jitter retries");
}

}  // namespace detail

/// Draw the mean payout field: zero-mean Gaussian field with separable
/// squared-exponential covariance over the (x, t) grid, sampled through the
/// two 1-D factors (field = Lx * Z * Lt^T), min-max rescaled to [0,1] over
/// the whole grid, then raised element-wise to the power alpha.
inline PayoutField sample_field(const FieldParams& params) {
  params.validate();
  PayoutField field;
  field.params = params;
  field.space = ArmSpace::uniform_grid(params.k_arms);

  const int k = params.k_arms;
  const long t = params.t_rounds;
  Rng rng(hash_combine(params.seed, hash_str("field")));

  Eigen::MatrixXd lx;
  if (k > 1) {
    lx = detail::cholesky_sqrt(detail::se_covariance(field.space.coordinates(), params.rho_x));
  } else {
    lx = Eigen::MatrixXd::Ones(1, 1);
  }

  Eigen::MatrixXd raw;
  if (params.stationary()) {
    // constant in time: one spatial draw replicated across columns
    Eigen::VectorXd z(k);
    for (int i = 0; i < k; ++i) z(i) = rng.next_normal();
    raw = (lx * z).replicate(1, t);
  } else {
    std::vector<double> times(t);
    for (long j = 0; j < t; ++j) times[j] = static_cast<double>(j + 1) * params.tau_s;
    Eigen::MatrixXd lt;
    if (t > 1) {
      lt = detail::cholesky_sqrt(detail::se_covariance(times, params.rho_t));
    } else {
      lt = Eigen::MatrixXd::Ones(1, 1);
    }
    Eigen::MatrixXd z(k, t);
    for (int i = 0; i < k; ++i)
      for (long j = 0; j < t; ++j) z(i, j) = rng.next_normal();
    raw = lx * z * lt.transpose();
  }

  const double lo = raw.minCoeff();
  const double hi = raw.maxCoeff();
  if (hi > lo) {
    field.mu = (raw.array() - lo) / (hi - lo);
  } else {
    field.mu = Eigen::MatrixXd::Constant(k, t, 0.5);  // degenerate 1x1 grid
  }
  if (params.alpha != 1.0) field.mu = field.mu.array().pow(params.alpha);
  return field;
}

/// Noisy payout for (arm, round): mu + Normal(0, sigma_noise^2) from the
/// supplied stream.
inline double observe(const PayoutField& field, int arm, long round, Rng& noise) {
  if (arm < 0 || arm >= field.mu.rows() || round < 1 || round > field.mu.cols())
    throw std::out_of_range("observe: arm/round out of range");
  double y = field.mu(arm, round - 1);
  if (field.params.sigma_noise > 0.0) y += field.params.sigma_noise * noise.next_normal();
  return y;
}

/// Best arm and its mean payout at a round. Ties go to the lowest index.
inline std::pair<int, double> oracle_best(const PayoutField& field, long round) {
  if (round < 1 || round > field.mu.cols()) throw std::out_of_range("oracle_best: round out of range");
  int best = 0;
  for (int i = 1; i < field.mu.rows(); ++i)
    if (field.mu(i, round - 1) > field.mu(best, round - 1)) best = i;
  return {best, field.mu(best, round - 1)};
}

}  // namespace qdb
