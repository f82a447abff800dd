#pragma once

#include <algorithm>
#include <limits>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdb/rng.hpp"

namespace qdb {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// K arm coordinates on a 1-D metric space. Distances are normalized by the
/// space diameter so that D(x_i, x_j) <= 1 for every pair.
class ArmSpace {
 public:
  ArmSpace(std::vector<double> coordinates, double diameter)
      : coords_(std::move(coordinates)), diameter_(diameter) {
    if (coords_.empty()) throw std::invalid_argument("ArmSpace: need at least one arm");
    if (diameter_ <= 0.0) throw std::invalid_argument("ArmSpace: diameter must be positive");
    for (std::size_t i = 1; i < coords_.size(); ++i)
      if (coords_[i] <= coords_[i - 1])
        throw std::invalid_argument("ArmSpace: coordinates must be strictly increasing");
    if (coords_.size() > 1 && coords_.back() - coords_.front() > diameter_ * (1.0 + 1e-12))
      throw std::invalid_argument("ArmSpace: diameter smaller than coordinate range");
  }

  explicit ArmSpace(const std::vector<double>& coordinates)
      : ArmSpace(coordinates, coordinates.size() > 1
                                  ? coordinates.back() - coordinates.front()
                                  : 1.0) {}

  // K equally spaced arms with raw spacing 2/K starting at -1.
  static ArmSpace uniform_grid(int k) {
    if (k < 1) throw std::invalid_argument("ArmSpace: K >= 1 required");
    std::vector<double> xs(k);
    for (int i = 0; i < k; ++i) xs[i] = -1.0 + 2.0 * i / k;
    const double diam = k > 1 ? xs.back() - xs.front() : 1.0;
    return ArmSpace(std::move(xs), diam);
  }

  int size() const { return static_cast<int>(coords_.size()); }
  double coordinate(int i) const { return coords_.at(i); }
  const std::vector<double>& coordinates() const { return coords_; }
  double diameter() const { return diameter_; }

  double normalized_distance(int i, int j) const {
    check_index(i);
    check_index(j);
    return std::abs(coords_[i] - coords_[j]) / diameter_;
  }

  // distance of an arbitrary coordinate from arm i, same normalization
  double normalized_distance_to(double x, int i) const {
    check_index(i);
    return std::abs(x - coords_[i]) / diameter_;
  }

 private:
  void check_index(int i) const {
    if (i < 0 || i >= size()) throw std::out_of_range("ArmSpace: arm index out of range");
  }

  std::vector<double> coords_;
  double diameter_;
};

/// One round of bandit feedback.
struct Observation {
  int arm = 0;
  double x = 0.0;  // coordinate of `arm`
  double t = 0.0;
  double y = 0.0;
};

struct PolicyDecision {
  int arm = 0;
  std::optional<std::vector<double>> index_values;
};

// argmax with lowest-index tie-break
inline int argmax_lowest(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

/// Policy interface. The harness owns the feedback loop: it calls update()
/// with the previous round's observation, then decide() for the next arm.
/// Policies never hold environment handles, so the same interface serves
/// simulation and log replay.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual void update(const Observation& obs) = 0;

  // t is physical time for this round, round is the 1-based round number.
  // Stochastic policies draw from their own seeded stream here.
  virtual PolicyDecision decide(double t, long round) = 0;

  // Action distribution the policy would play at (t, round) without
  // consuming its random stream. Deterministic policies return an indicator.
  virtual std::vector<double> action_probs(double t, long round) = 0;

  virtual const ArmSpace& space() const = 0;
};

/// Uniform random arm selection.
class RandomPolicy final : public Policy {
 public:
  RandomPolicy(ArmSpace space, std::uint64_t seed) : space_(std::move(space)), rng_(seed) {}

  void update(const Observation&) override {}

  PolicyDecision decide(double, long) override {
    return PolicyDecision{rng_.next_int(space_.size()), std::nullopt};
  }

  std::vector<double> action_probs(double, long) override {
    return std::vector<double>(space_.size(), 1.0 / space_.size());
  }

  const ArmSpace& space() const override { return space_; }

 private:
  ArmSpace space_;
  Rng rng_;
};

}  // namespace qdb
