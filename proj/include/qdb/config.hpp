#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdb/baselines.hpp"
#include "qdb/core.hpp"
#include "qdb/gp.hpp"
#include "qdb/quickdraw.hpp"

namespace qdb {

using json = nlohmann::json;

/// Named policy configuration; `params` holds the per-policy keys described
/// in each policy's parameter struct.
struct PolicySpec {
  std::string name;  // random | quickdraw | greedy | restless | sw_gp_ucb | sliding_ucb
  json params = json::object();
};

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::vector<std::string>& known,
                                const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const std::string& k : known)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::invalid_argument("unknown key: " + (context.empty() ? it.key() : context + "." + it.key()));
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (obj.contains(key)) return obj.at(key).get<T>();
  return fallback;
}

// "inf" / null / missing map to infinity for the stationary encodings
inline double get_scale(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("bad value for " + key + ": expected number or \"inf\"");
  }
  return v.get<double>();
}

}  // namespace detail

inline QuickDrawParams quickdraw_params_from_json(const json& p) {
  detail::reject_unknown_keys(
      p, {"ell_x", "ell_t", "rho2", "gamma", "gamma_mode", "L", "delta", "truncation"}, "");
  QuickDrawParams qp;
  qp.ell_x = detail::get_or(p, "ell_x", 1.0);
  qp.ell_t = detail::get_scale(p, "ell_t", 1.0);
  qp.rho2 = detail::get_or(p, "rho2", 1e-7);
  const std::string mode = detail::get_or<std::string>(p, "gamma_mode", "fixed");
  if (mode == "fixed") {
    qp.gamma_mode.kind = GammaMode::kFixed;
    qp.gamma_mode.gamma = detail::get_or(p, "gamma", 2.0);
  } else if (mode == "theoretical") {
    qp.gamma_mode.kind = GammaMode::kTheoretical;
    qp.gamma_mode.lipschitz = detail::get_or(p, "L", 1.0);
    qp.gamma_mode.delta = detail::get_or(p, "delta", 0.1);
  } else {
    throw std::invalid_argument("quickdraw: gamma_mode must be fixed or theoretical");
  }
  if (p.contains("truncation")) qp.c_trunc = p.at("truncation").get<double>();
  return qp;
}

inline std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const ArmSpace& space,
                                           std::uint64_t seed) {
  const json& p = spec.params;
  if (spec.name == "random") {
    detail::reject_unknown_keys(p, {}, spec.name);
    return std::make_unique<RandomPolicy>(space, seed);
  }
  if (spec.name == "quickdraw") {
    return std::make_unique<QuickDrawPolicy>(space, quickdraw_params_from_json(p));
  }
  if (spec.name == "greedy") {
    detail::reject_unknown_keys(p, {"epsilon", "window"}, spec.name);
    SlidingGreedyParams gp;
    gp.epsilon = detail::get_or(p, "epsilon", 0.1);
    gp.window = detail::get_or(p, "window", 100);
    return std::make_unique<SlidingGreedyPolicy>(space, gp, seed);
  }
  if (spec.name == "restless") {
    detail::reject_unknown_keys(p, {"sigma_r"}, spec.name);
    RestlessParams rp;
    rp.sigma_r = detail::get_or(p, "sigma_r", 1.0);
    return std::make_unique<RestlessPolicy>(space, rp, seed);
  }
  if (spec.name == "sw_gp_ucb") {
    detail::reject_unknown_keys(
        p, {"window", "lengthscale", "amplitude2", "noise2", "ucb_beta", "hyperopt"}, spec.name);
    GpParams gp;
    gp.window = detail::get_or(p, "window", 100);
    gp.lengthscale = detail::get_or(p, "lengthscale", 0.1);
    gp.amplitude2 = detail::get_or(p, "amplitude2", 1.0);
    gp.noise2 = detail::get_or(p, "noise2", 1e-4);
    gp.ucb_beta = detail::get_or(p, "ucb_beta", 4.0);
    gp.hyperopt = detail::get_or(p, "hyperopt", true);
    return std::make_unique<SwGpUcbPolicy>(space, gp);
  }
  if (spec.name == "sliding_ucb") {
    detail::reject_unknown_keys(p, {"window", "xi", "B"}, spec.name);
    SlidingUcbParams up;
    up.window = detail::get_or(p, "window", 100);
    up.xi = detail::get_or(p, "xi", 0.5);
    up.reward_bound = detail::get_or(p, "B", 1.0);
    return std::make_unique<SlidingUcbPolicy>(space, up);
  }
  throw std::invalid_argument("unknown policy: " + spec.name);
}

}  // namespace qdb
