#pragma once

// Double-estimation Relief: the running weight estimates feed back into the
// neighbor-search distance while they are still being estimated. The weight
// update itself is the standard prior-weighted k-neighbor rule; only the
// distance each iteration differs.
//
//   kWeighted:    distance factor of feature A at iteration t is
//                 max(W_t[A], 0), where W_t is the running estimate after
//                 t-1 updates.
//   kProgressive: factor is max(f(W_t[A], t), 0) with
//                 f(w, t) = (1 - w) / t^T + w, so every feature counts
//                 fully at t = 1 and converges to its weight as t grows.
//
// If a factor vector degenerates to all zeros the iteration falls back to
// the unweighted distance (every factor 1).

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relieve/dataset.hpp"
#include "relieve/errors.hpp"
#include "relieve/relief.hpp"

namespace relieve {

enum class DoubleVariant { kWeighted, kProgressive };

// Exponent schedule for the progressive factor. The automatic choice
// T = 2 / ln(m) makes the final iteration's factor m-independent:
// f(w, m) = w + (1 - w) e^-2.
struct ProgressiveSchedule {
  bool automatic = true;
  double T = 1.0;  // used when automatic is false

  double exponent(std::size_t m) const {
    if (!automatic) return T;
    if (m < 2) throw UsageError("progressive schedule: automatic T needs at least 2 iterations");
    return 2.0 / std::log(static_cast<double>(m));
  }
};

// f(w, t) = (1 - w) / t^T + w. Pinned endpoints: f(w, 1) = 1 for every T,
// and f(w, t) -> w as t grows (for T > 0).
inline double progressive_factor(double w, std::size_t t, double T) {
  if (t < 1) throw UsageError("progressive_factor: iterations are 1-based");
  return (1.0 - w) / std::pow(static_cast<double>(t), T) + w;
}

// Per-iteration distance factors; negative values clamp to zero, and an
// all-zero vector falls back to all ones.
inline std::vector<double> distance_factors(DoubleVariant variant,
                                            std::span<const double> running, std::size_t t,
                                            double T) {
  std::vector<double> factors(running.size(), 0.0);
  bool any = false;
  for (std::size_t f = 0; f < running.size(); ++f) {
    const double raw = variant == DoubleVariant::kWeighted
                           ? running[f]
                           : progressive_factor(running[f], t, T);
    factors[f] = raw > 0.0 ? raw : 0.0;
    any = any || factors[f] > 0.0;
  }
  if (!any) factors.assign(running.size(), 1.0);
  return factors;
}

inline FeatureWeights run_double_relief(const Dataset& d, const ReliefConfig& cfg,
                                        DoubleVariant variant,
                                        ProgressiveSchedule sched = {}) {
  if (d.n_rows() < 2) throw UsageError("relief: need at least two instances");
  if (cfg.k == 0) throw UsageError("relief: k must be positive");
  if (cfg.m > d.n_rows())
    throw UsageError("relief: m cannot exceed the instance count");
  check_valid(d);

  const std::size_t m = cfg.m == 0 ? d.n_rows() : cfg.m;
  const double T = variant == DoubleVariant::kProgressive ? sched.exponent(m) : 0.0;

  const DistanceModel model(d, cfg.metric);
  const auto priors = detail::class_priors(d);
  ReliefConfig order_cfg = cfg;
  order_cfg.variant = ReliefVariant::kRelieff;
  const auto order = detail::iteration_order(d, order_cfg, m);
  const double inv_m = 1.0 / static_cast<double>(m);

  std::vector<double> w(d.n_features(), 0.0);
  for (std::size_t t = 0; t < order.size(); ++t) {
    const auto factors = distance_factors(variant, w, t + 1, T);
    const NeighborSet nb = find_neighbors(model, order[t], cfg.k, factors);
    detail::apply_update(model, order[t], nb, priors, inv_m, w);
  }

  std::map<std::string, std::string> params{{"seed", std::to_string(cfg.seed)},
                                            {"k", std::to_string(cfg.k)},
                                            {"m", std::to_string(m)}};
  if (variant == DoubleVariant::kProgressive)
    params["T"] = sched.automatic ? "auto" : detail::format_number(T);
  return detail::pack_weights(d, w, variant == DoubleVariant::kWeighted ? "drelieff" : "pdrelieff",
                              std::move(params));
}

}  // namespace relieve
