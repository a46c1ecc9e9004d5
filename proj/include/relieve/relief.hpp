#pragma once

// Relief-family feature weighting: per-feature value difference metrics,
// nearest-neighbor search, and the instance-sampling weight estimators.
//
// Weight update (k neighbors, m iterations, class priors P):
//   W[A] -= sum_h diff(A, Ri, h) / (m * |hits|)
//   W[A] += P(c)/(1 - P(class(Ri))) * sum_j diff(A, Ri, j) / (m * |misses_c|)
// for every class c != class(Ri). With one hit and one miss and two classes
// the prior ratio is 1 and the update reduces to the original rule.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "relieve/dataset.hpp"
#include "relieve/errors.hpp"
#include "relieve/probstats.hpp"
#include "relieve/rng.hpp"

namespace relieve {

// How missing operands contribute to a per-feature difference.
//   kBasic:       any missing operand scores the maximum difference, 1.
//   kConditional: missing operands are integrated out with class-conditional
//                 value probabilities (one missing: 1 - P(value(other)|class(missing));
//                 both missing: 1 - sum_v P(v|class_1) P(v|class_2)).
enum class MissingDiff { kBasic, kConditional };

struct DiffMetric {
  MissingDiff missing = MissingDiff::kBasic;
  bool laplace = false;  // add-one smoothing for the conditional tables
};

// Precomputed per-feature machinery for instance differences over one
// dataset. Linear ranges are dataset-level constants; the conditional
// mode additionally bins linear features (equal-width, 10 bins) and keeps
// P(value|class) per feature.
class DistanceModel {
 public:
  explicit DistanceModel(const Dataset& d, DiffMetric metric = {}) : data_(&d), metric_(metric) {
    width_.resize(d.n_features(), 0.0);
    for (std::size_t f = 0; f < d.n_features(); ++f)
      if (d.schema[f].kind == FeatureKind::kLinear) width_[f] = d.schema[f].max - d.schema[f].min;
    if (metric_.missing == MissingDiff::kConditional) build_conditional_tables();
  }

  const Dataset& data() const { return *data_; }

  // Difference of one feature between two instances, in [0, 1].
  double diff(std::size_t feature, std::size_t i, std::size_t j) const {
    const Cell& a = data_->rows[i][feature];
    const Cell& b = data_->rows[j][feature];
    if (!a.missing && !b.missing) return present_diff(feature, a, b);
    if (metric_.missing == MissingDiff::kBasic) return 1.0;
    return conditional_missing_diff(feature, i, j);
  }

  // Unweighted instance distance: the sum of per-feature differences.
  double distance(std::size_t i, std::size_t j) const {
    double s = 0.0;
    for (std::size_t f = 0; f < data_->n_features(); ++f) s += diff(f, i, j);
    return s;
  }

  // Factor-weighted distance. Factors must be non-negative (callers clamp).
  double distance(std::size_t i, std::size_t j, std::span<const double> factors) const {
    if (factors.size() != data_->n_features())
      throw UsageError("distance: factor count does not match feature count");
    double s = 0.0;
    for (std::size_t f = 0; f < data_->n_features(); ++f) {
      if (factors[f] < 0.0) throw UsageError("distance: negative factor");
      if (factors[f] != 0.0) s += factors[f] * diff(f, i, j);
    }
    return s;
  }

  // Distance from an external query row (no class; basic missing handling).
  double distance_to(std::span<const Cell> query, std::size_t j,
                     std::span<const double> factors = {}) const {
    if (query.size() != data_->n_features())
      throw UsageError("distance_to: query arity does not match feature count");
    if (!factors.empty() && factors.size() != data_->n_features())
      throw UsageError("distance_to: factor count does not match feature count");
    double s = 0.0;
    for (std::size_t f = 0; f < data_->n_features(); ++f) {
      const double w = factors.empty() ? 1.0 : factors[f];
      if (w < 0.0) throw UsageError("distance_to: negative factor");
      if (w == 0.0) continue;
      const Cell& a = query[f];
      const Cell& b = data_->rows[j][f];
      s += w * ((a.missing || b.missing) ? 1.0 : present_diff(f, a, b));
    }
    return s;
  }

 private:
  double present_diff(std::size_t feature, const Cell& a, const Cell& b) const {
    if (data_->schema[feature].kind == FeatureKind::kNominal)
      return a.value == b.value ? 0.0 : 1.0;
    if (width_[feature] <= 0.0) return 0.0;  // constant feature
    const double t = std::abs(a.value - b.value) / width_[feature];
    return std::clamp(t, 0.0, 1.0);
  }

  void build_conditional_tables() {
    const Dataset& d = *data_;
    code_.assign(d.n_features(), {});
    cond_.assign(d.n_features(), {});
    n_codes_.assign(d.n_features(), 0);
    for (std::size_t f = 0; f < d.n_features(); ++f) {
      Dataset view;
      const Dataset* src = &d;
      if (d.schema[f].kind == FeatureKind::kLinear) {
        bool all_missing = true;
        for (std::size_t i = 0; i < d.n_rows() && all_missing; ++i)
          all_missing = d.rows[i][f].missing;
        if (all_missing) continue;  // table stays empty; both-missing falls back below
        view = discretize(d, f, 10);
        src = &view;
      }
      const auto& rows = src->rows;
      const std::size_t n_vals = src->schema[f].values.size();
      n_codes_[f] = n_vals;
      code_[f].assign(d.n_rows(), -1);
      for (std::size_t i = 0; i < d.n_rows(); ++i)
        if (!rows[i][f].missing) code_[f][i] = static_cast<int>(rows[i][f].value);
      const ContingencyTable t = contingency(*src, f);
      cond_[f] = value_given_class(t, metric_.laplace);
    }
  }

  double conditional_missing_diff(std::size_t feature, std::size_t i, std::size_t j) const {
    if (cond_[feature].empty()) return 1.0;  // no usable table for this feature
    const Cell& a = data_->rows[i][feature];
    const auto ci = static_cast<std::size_t>(data_->labels[i]);
    const auto cj = static_cast<std::size_t>(data_->labels[j]);
    if (a.missing && data_->rows[j][feature].missing) {
      double s = 0.0;
      for (std::size_t v = 0; v < n_codes_[feature]; ++v)
        s += cond_[feature][ci][v] * cond_[feature][cj][v];
      return std::clamp(1.0 - s, 0.0, 1.0);
    }
    // Exactly one operand missing: condition on its class, read the other's value.
    const bool a_missing = a.missing;
    const std::size_t missing_class = a_missing ? ci : cj;
    const int other_code = a_missing ? code_[feature][j] : code_[feature][i];
    return std::clamp(1.0 - cond_[feature][missing_class][static_cast<std::size_t>(other_code)],
                      0.0, 1.0);
  }

  const Dataset* data_;
  DiffMetric metric_;
  std::vector<double> width_;
  std::vector<std::vector<int>> code_;                   // discrete view per feature (conditional mode)
  std::vector<std::vector<std::vector<double>>> cond_;   // cond_[f][class][code]
  std::vector<std::size_t> n_codes_;
};

// Nearest neighbors of one instance, grouped by class. Each list is sorted
// by (distance, index) ascending and holds at most k entries; classes with
// fewer members contribute what they have.
struct NeighborSet {
  std::vector<std::size_t> hits;                    // same class as the query
  std::vector<std::vector<std::size_t>> by_class;   // misses, indexed by class code; own class empty
};

inline NeighborSet find_neighbors(const DistanceModel& model, std::size_t query, std::size_t k,
                                  std::span<const double> factors = {}) {
  const Dataset& d = model.data();
  if (query >= d.n_rows()) throw UsageError("find_neighbors: query index out of range");
  if (k == 0) throw UsageError("find_neighbors: k must be positive");

  const auto own = static_cast<std::size_t>(d.labels[query]);
  std::vector<std::vector<std::pair<double, std::size_t>>> buckets(d.class_values.size());
  for (std::size_t j = 0; j < d.n_rows(); ++j) {
    if (j == query) continue;
    const double dist =
        factors.empty() ? model.distance(query, j) : model.distance(query, j, factors);
    buckets[static_cast<std::size_t>(d.labels[j])].emplace_back(dist, j);
  }

  NeighborSet out;
  out.by_class.resize(d.class_values.size());
  for (std::size_t c = 0; c < buckets.size(); ++c) {
    auto& b = buckets[c];
    const std::size_t take = std::min(k, b.size());
    std::partial_sort(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(take), b.end());
    auto& dst = (c == own) ? out.hits : out.by_class[c];
    dst.reserve(take);
    for (std::size_t t = 0; t < take; ++t) dst.push_back(b[t].second);
  }
  return out;
}

// Convenience overload that builds a throwaway model.
inline NeighborSet find_neighbors(const Dataset& d, std::size_t query, std::size_t k,
                                  std::span<const double> factors = {}, DiffMetric metric = {}) {
  return find_neighbors(DistanceModel(d, metric), query, k, factors);
}

enum class ReliefVariant {
  kOriginal,  // random sampling, 1 hit / 1 miss, two-class only
  kRelieved,  // deterministic pass over all instances in index order, 1 hit / 1 miss
  kRelieff,   // k hits, k misses per class, prior-weighted misses
  kMyopic,    // closed-form estimate, no neighbor search
};

struct ReliefConfig {
  ReliefVariant variant = ReliefVariant::kRelieff;
  std::size_t m = 0;  // iteration count; 0 means one per instance (ALL)
  std::size_t k = 10;
  std::uint64_t seed = 0;
  DiffMetric metric;
};

namespace detail {

inline std::vector<double> class_priors(const Dataset& d) {
  std::vector<double> p(d.class_values.size(), 0.0);
  for (const int l : d.labels) p[static_cast<std::size_t>(l)] += 1.0;
  for (auto& v : p) v /= static_cast<double>(d.n_rows());
  return p;
}

// Iteration order: every instance exactly once (seed-shuffled) when m equals
// the instance count; independent uniform draws otherwise. Relieved walks
// index order.
inline std::vector<std::size_t> iteration_order(const Dataset& d, const ReliefConfig& cfg,
                                                std::size_t m) {
  std::vector<std::size_t> order;
  if (cfg.variant == ReliefVariant::kRelieved || m == d.n_rows()) {
    order.resize(d.n_rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (cfg.variant != ReliefVariant::kRelieved) {
      Rng rng(cfg.seed);
      rng.shuffle(order);
    }
    return order;
  }
  Rng rng(cfg.seed);
  order.reserve(m);
  for (std::size_t t = 0; t < m; ++t)
    order.push_back(static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(d.n_rows()) - 1)));
  return order;
}

// One weight update from a picked instance and its neighbor set.
inline void apply_update(const DistanceModel& model, std::size_t query, const NeighborSet& nb,
                         const std::vector<double>& priors, double inv_m,
                         std::vector<double>& w) {
  const Dataset& d = model.data();
  const auto own = static_cast<std::size_t>(d.labels[query]);
  const std::size_t nf = d.n_features();
  if (!nb.hits.empty()) {
    const double scale = inv_m / static_cast<double>(nb.hits.size());
    for (const auto h : nb.hits)
      for (std::size_t f = 0; f < nf; ++f) w[f] -= scale * model.diff(f, query, h);
  }
  for (std::size_t c = 0; c < nb.by_class.size(); ++c) {
    if (c == own || nb.by_class[c].empty()) continue;
    const double ratio = priors[c] / (1.0 - priors[own]);
    const double scale = ratio * inv_m / static_cast<double>(nb.by_class[c].size());
    for (const auto j : nb.by_class[c])
      for (std::size_t f = 0; f < nf; ++f) w[f] += scale * model.diff(f, query, j);
  }
}

inline FeatureWeights pack_weights(const Dataset& d, const std::vector<double>& w,
                                   std::string algorithm,
                                   std::map<std::string, std::string> params) {
  FeatureWeights out;
  out.algorithm = std::move(algorithm);
  out.params = std::move(params);
  for (std::size_t f = 0; f < d.n_features(); ++f) {
    out.order.push_back(d.schema[f].name);
    out.weights[d.schema[f].name] = std::clamp(w[f], -1.0, 1.0);
  }
  return out;
}

}  // namespace detail

// Closed-form weight for one feature, derived from its contingency table.
// With the value-frequency reweighting G below and squared class prior mass
// S = sum_c P(c)^2, the weight is S * G / (S * (1 - S)); degenerate class
// distributions (S of 0 or 1) score 0. Linear features are binned first.
inline double myopic_relieff(const Dataset& d, std::size_t feature) {
  if (feature >= d.n_features()) throw UsageError("myopic: feature index out of range");
  ContingencyTable t;
  if (d.schema[feature].kind == FeatureKind::kLinear) {
    const Dataset binned = discretize(d, feature, 10);
    t = contingency(binned, feature);
  } else {
    t = contingency(d, feature);
  }
  const double m = static_cast<double>(t.total);

  double same_class = 0.0;  // sum_c P(c)^2
  for (const auto n : t.class_totals) {
    const double pc = static_cast<double>(n) / m;
    same_class += pc * pc;
  }
  if (same_class <= 0.0 || same_class >= 1.0) return 0.0;

  double sq_value_mass = 0.0;  // sum_x P(x)^2
  for (const auto n : t.value_totals) {
    const double px = static_cast<double>(n) / m;
    sq_value_mass += px * px;
  }

  // G: squared-frequency-weighted mean of the squared class posteriors,
  // minus the squared class prior mass.
  double same_class_given_eq = 0.0;
  for (std::size_t v = 0; v < t.feature_values.size(); ++v) {
    if (t.value_totals[v] == 0) continue;
    const double px = static_cast<double>(t.value_totals[v]) / m;
    double posterior_sq = 0.0;
    for (std::size_t c = 0; c < t.class_values.size(); ++c) {
      const double pcx = static_cast<double>(t.counts[c][v]) /
                         static_cast<double>(t.value_totals[v]);
      posterior_sq += pcx * pcx;
    }
    same_class_given_eq += (px * px / sq_value_mass) * posterior_sq;
  }
  const double gain = same_class_given_eq - same_class;

  const double w = same_class * gain / (same_class * (1.0 - same_class));
  return std::clamp(w, -1.0, 1.0);
}

// Runs the selected estimator over the whole dataset and returns one weight
// per feature (all within [-1, 1]) plus provenance.
inline FeatureWeights run_relief(const Dataset& d, const ReliefConfig& cfg) {
  if (d.n_rows() < 2 && cfg.variant != ReliefVariant::kMyopic)
    throw UsageError("relief: need at least two instances");
  check_valid(d);

  std::map<std::string, std::string> params{{"seed", std::to_string(cfg.seed)}};

  if (cfg.variant == ReliefVariant::kMyopic) {
    std::vector<double> w(d.n_features(), 0.0);
    for (std::size_t f = 0; f < d.n_features(); ++f) w[f] = myopic_relieff(d, f);
    return detail::pack_weights(d, w, "myopic", {});
  }

  const bool pair_update =
      cfg.variant == ReliefVariant::kOriginal || cfg.variant == ReliefVariant::kRelieved;
  if (pair_update && d.class_values.size() != 2)
    throw UsageError("relief: this variant handles exactly two classes; use relieff");
  if (cfg.k == 0) throw UsageError("relief: k must be positive");
  if (cfg.m > d.n_rows())
    throw UsageError("relief: m cannot exceed the instance count");

  const std::size_t m =
      (cfg.variant == ReliefVariant::kRelieved || cfg.m == 0) ? d.n_rows() : cfg.m;
  const std::size_t k = pair_update ? 1 : cfg.k;

  const DistanceModel model(d, cfg.metric);
  const auto priors = detail::class_priors(d);
  const auto order = detail::iteration_order(d, cfg, m);
  const double inv_m = 1.0 / static_cast<double>(m);

  std::vector<double> w(d.n_features(), 0.0);
  for (const auto query : order) {
    const NeighborSet nb = find_neighbors(model, query, k);
    if (pair_update) {
      // Fig-2-style update: plain difference terms, no prior ratio.
      const auto own = static_cast<std::size_t>(d.labels[query]);
      for (std::size_t f = 0; f < d.n_features(); ++f) {
        if (!nb.hits.empty()) w[f] -= inv_m * model.diff(f, query, nb.hits[0]);
        const auto& other = nb.by_class[1 - own];
        if (!other.empty()) w[f] += inv_m * model.diff(f, query, other[0]);
      }
    } else {
      detail::apply_update(model, query, nb, priors, inv_m, w);
    }
  }

  params["k"] = std::to_string(k);
  params["m"] = std::to_string(m);
  const char* name = cfg.variant == ReliefVariant::kOriginal  ? "relief"
                     : cfg.variant == ReliefVariant::kRelieved ? "relieved"
                                                                : "relieff";
  return detail::pack_weights(d, w, name, std::move(params));
}

}  // namespace relieve
