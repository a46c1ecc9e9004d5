#pragma once

// Impurity / association filters for a single nominal feature against the
// class. All of them are functions of the feature's contingency table;
// linear features are binned (equal-width, 10 bins) before evaluation.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "relieve/dataset.hpp"
#include "relieve/errors.hpp"
#include "relieve/probstats.hpp"

namespace relieve {

enum class FilterMeasure {
  kCcf,          // mean squared class posterior at each value (one-vs-rest)
  kGiniGain,     // impurity drop of the Gini index
  kInfoGain,     // H(C) - H(C|X)
  kGainRatio,    // info gain / H(X)
  kEntropyDist,  // H(C,X) - MI(C,X)
  kMantarasDist, // 2 - (H(X) + H(C)) / H(C,X)
  kDistDiff,     // L1 distance between joint and product distributions
  kKlDiff,       // KL divergence of joint from product (== MI)
  kChi2,         // Pearson chi-squared statistic
};

namespace detail {

inline ContingencyTable filter_table(const Dataset& d, std::size_t feature, int bins) {
  if (feature >= d.n_features()) throw UsageError("filter: feature index out of range");
  if (d.schema[feature].kind == FeatureKind::kLinear) {
    const Dataset binned = discretize(d, feature, bins);
    return contingency(binned, feature);
  }
  return contingency(d, feature);
}

inline double sum_sq_class_posterior(const ContingencyTable& t, std::size_t value) {
  if (t.value_totals[value] == 0) return 0.0;
  double s = 0.0;
  for (std::size_t c = 0; c < t.class_values.size(); ++c) {
    const double p = static_cast<double>(t.counts[c][value]) /
                     static_cast<double>(t.value_totals[value]);
    s += p * p;
  }
  return s;
}

}  // namespace detail

// Probability of each class given the feature's designated positive value.
// Defined for binary nominal features only. Returns class label -> P(c|x+).
inline std::map<std::string, double> pcf_weights(const Dataset& d, std::size_t feature,
                                                 const std::string& positive_value = {}) {
  if (feature >= d.n_features()) throw UsageError("pcf: feature index out of range");
  const FeatureSchema& fs = d.schema[feature];
  if (fs.kind != FeatureKind::kNominal)
    throw UsageError("pcf: feature " + fs.name + " is linear; discretize to two bins first");
  if (fs.values.size() != 2)
    throw UsageError("pcf: feature " + fs.name + " is not binary");
  const std::string pos = positive_value.empty() ? fs.values[0] : positive_value;
  const int v = fs.value_index(pos);
  if (v < 0) throw UsageError("pcf: value " + pos + " not in feature " + fs.name);

  const ContingencyTable t = contingency(d, feature);
  std::map<std::string, double> out;
  for (std::size_t c = 0; c < t.class_values.size(); ++c) {
    const auto tot = t.value_totals[static_cast<std::size_t>(v)];
    out[t.class_values[c]] =
        tot == 0 ? 0.0
                 : static_cast<double>(t.counts[c][static_cast<std::size_t>(v)]) /
                       static_cast<double>(tot);
  }
  return out;
}

struct CcfResult {
  double weight = 0.0;
  // One entry per feature value: the squared-posterior sum of the
  // one-vs-rest variant whose positive value it is.
  std::vector<std::pair<std::string, double>> variants;
};

// Sum of squared class posteriors at the positive value. Binary features
// are scored at their designated positive value; wider features are scored
// one-vs-rest per value and averaged.
inline CcfResult ccf_weight(const Dataset& d, std::size_t feature,
                            const std::string& positive_value = {}) {
  if (feature >= d.n_features()) throw UsageError("ccf: feature index out of range");
  const FeatureSchema& fs = d.schema[feature];
  if (fs.kind != FeatureKind::kNominal)
    throw UsageError("ccf: feature " + fs.name + " is linear; discretize it first");
  const ContingencyTable t = contingency(d, feature);

  CcfResult r;
  if (fs.values.size() == 2) {
    const std::string pos = positive_value.empty() ? fs.values[0] : positive_value;
    const int v = fs.value_index(pos);
    if (v < 0) throw UsageError("ccf: value " + pos + " not in feature " + fs.name);
    r.weight = detail::sum_sq_class_posterior(t, static_cast<std::size_t>(v));
    r.variants.emplace_back(pos, r.weight);
    return r;
  }
  std::size_t observed = 0;
  for (std::size_t v = 0; v < t.feature_values.size(); ++v) {
    if (t.value_totals[v] == 0) continue;
    const double s = detail::sum_sq_class_posterior(t, v);
    r.variants.emplace_back(t.feature_values[v], s);
    r.weight += s;
    ++observed;
  }
  r.weight /= static_cast<double>(observed);
  return r;
}

// Per-value weights w(x) = sqrt(sum_c (P(x|c)/P(x))^2). The `classic`
// variant scores each value by its squared class posterior sum instead.
inline std::map<std::string, double> vdm_weights(const Dataset& d, std::size_t feature,
                                                 bool classic = false) {
  if (feature >= d.n_features()) throw UsageError("vdm: feature index out of range");
  if (d.schema[feature].kind != FeatureKind::kNominal)
    throw UsageError("vdm: feature " + d.schema[feature].name + " is linear; discretize it first");
  const ContingencyTable t = contingency(d, feature);

  std::map<std::string, double> out;
  for (std::size_t v = 0; v < t.feature_values.size(); ++v) {
    if (t.value_totals[v] == 0) continue;
    if (classic) {
      out[t.feature_values[v]] = detail::sum_sq_class_posterior(t, v);
      continue;
    }
    const double px = static_cast<double>(t.value_totals[v]) / static_cast<double>(t.total);
    double s = 0.0;
    for (std::size_t c = 0; c < t.class_values.size(); ++c) {
      if (t.class_totals[c] == 0) continue;
      const double pxc = static_cast<double>(t.counts[c][v]) /
                         static_cast<double>(t.class_totals[c]);
      const double ratio = pxc / px;
      s += ratio * ratio;
    }
    out[t.feature_values[v]] = std::sqrt(s);
  }
  return out;
}

inline double filter_weight(const Dataset& d, std::size_t feature, FilterMeasure measure,
                            int bins = 10) {
  const ContingencyTable t = detail::filter_table(d, feature, bins);
  const double m = static_cast<double>(t.total);

  switch (measure) {
    case FilterMeasure::kCcf: {
      // Route through the binned view so linear features behave like the rest.
      if (d.schema[feature].kind == FeatureKind::kLinear) {
        const Dataset binned = discretize(d, feature, bins);
        return ccf_weight(binned, feature).weight;
      }
      return ccf_weight(d, feature).weight;
    }
    case FilterMeasure::kGiniGain: {
      double after = 0.0;
      for (std::size_t v = 0; v < t.feature_values.size(); ++v) {
        if (t.value_totals[v] == 0) continue;
        const double px = static_cast<double>(t.value_totals[v]) / m;
        after += px * detail::sum_sq_class_posterior(t, v);
      }
      double prior = 0.0;
      for (std::size_t c = 0; c < t.class_values.size(); ++c) {
        const double pc = static_cast<double>(t.class_totals[c]) / m;
        prior += pc * pc;
      }
      return after - prior;
    }
    case FilterMeasure::kInfoGain:
      return class_entropy(t) - conditional_class_entropy(t);
    case FilterMeasure::kGainRatio: {
      const double hx = feature_entropy(t);
      if (hx == 0.0) return 0.0;
      return (class_entropy(t) - conditional_class_entropy(t)) / hx;
    }
    case FilterMeasure::kEntropyDist: {
      const auto pdm = pdm_from_contingency(t, d.schema[feature].name, d.class_name);
      return joint_entropy(t) - mutual_information(pdm);
    }
    case FilterMeasure::kMantarasDist: {
      const double hcx = joint_entropy(t);
      if (hcx == 0.0) return 0.0;
      return 2.0 - (feature_entropy(t) + class_entropy(t)) / hcx;
    }
    case FilterMeasure::kDistDiff: {
      double s = 0.0;
      for (std::size_t c = 0; c < t.class_values.size(); ++c)
        for (std::size_t v = 0; v < t.feature_values.size(); ++v) {
          const double joint = static_cast<double>(t.counts[c][v]) / m;
          const double prod = (static_cast<double>(t.class_totals[c]) / m) *
                              (static_cast<double>(t.value_totals[v]) / m);
          s += std::abs(joint - prod);
        }
      return s;
    }
    case FilterMeasure::kKlDiff: {
      const auto pdm = pdm_from_contingency(t, d.schema[feature].name, d.class_name);
      return mutual_information(pdm);
    }
    case FilterMeasure::kChi2: {
      double s = 0.0;
      for (std::size_t c = 0; c < t.class_values.size(); ++c)
        for (std::size_t v = 0; v < t.feature_values.size(); ++v) {
          double expected = static_cast<double>(t.class_totals[c]) *
                            static_cast<double>(t.value_totals[v]) / m;
          if (expected == 0.0) expected = 1e-9;
          const double delta = static_cast<double>(t.counts[c][v]) - expected;
          s += delta * delta / expected;
        }
      return s;
    }
  }
  throw InternalError("filter_weight: unhandled measure");
}

}  // namespace relieve
