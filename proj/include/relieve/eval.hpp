#pragma once

// Evaluation harness: ground-truth separation criteria over a weight
// vector, a 1-nearest-neighbor classifier, and cross-validated accuracy
// curves over weight-ranked feature subsets.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "relieve/dataset.hpp"
#include "relieve/errors.hpp"
#include "relieve/relief.hpp"
#include "relieve/rng.hpp"
#include "relieve/synth.hpp"

namespace relieve {

struct CriteriaReport {
  double separability = 0.0;   // worst relevant weight - best irrelevant weight
  double usability = 0.0;      // best relevant weight - best irrelevant weight
  double minimality = 0.0;     // |relevant| / |{F : W_F >= worst relevant}|
  double completeness = 0.0;   // share of relevant features above every irrelevant one
  std::vector<std::string> ordering;  // all features, weight descending
};

namespace detail {

// Stable ranking: weight descending, ties by original feature position.
inline std::vector<std::string> ranked_features(const FeatureWeights& w) {
  std::vector<std::string> names = w.order;
  for (const auto& [name, _] : w.weights)
    if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
  std::vector<std::size_t> idx(names.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return w.weights.at(names[a]) > w.weights.at(names[b]);
  });
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (const auto i : idx) out.push_back(names[i]);
  return out;
}

}  // namespace detail

inline CriteriaReport criteria(const FeatureWeights& w, const GroundTruth& truth) {
  if (truth.relevant.empty()) throw UsageError("criteria: empty relevant set");
  if (truth.irrelevant.empty()) throw UsageError("criteria: empty irrelevant set");
  auto weight_of = [&](const std::string& name) {
    const auto it = w.weights.find(name);
    if (it == w.weights.end()) throw UsageError("criteria: no weight for feature " + name);
    return it->second;
  };

  double worst_rel = weight_of(truth.relevant[0]);
  double best_rel = worst_rel;
  for (const auto& f : truth.relevant) {
    const double v = weight_of(f);
    worst_rel = std::min(worst_rel, v);
    best_rel = std::max(best_rel, v);
  }
  double best_irr = weight_of(truth.irrelevant[0]);
  for (const auto& f : truth.irrelevant) best_irr = std::max(best_irr, weight_of(f));

  CriteriaReport r;
  r.separability = worst_rel - best_irr;
  r.usability = best_rel - best_irr;

  std::size_t at_least_worst = 0;
  for (const auto& [_, v] : w.weights)
    if (v >= worst_rel) ++at_least_worst;
  r.minimality = static_cast<double>(truth.relevant.size()) / static_cast<double>(at_least_worst);

  std::size_t clear = 0;
  for (const auto& f : truth.relevant)
    if (weight_of(f) > best_irr) ++clear;
  r.completeness = static_cast<double>(clear) / static_cast<double>(truth.relevant.size());

  r.ordering = detail::ranked_features(w);
  return r;
}

// 1-nearest-neighbor prediction for an external query row. Distance is the
// unweighted (or factor-masked) per-feature difference sum with maximal
// difference for missing operands; ties resolve to the lowest row index.
inline std::string knn_predict(const Dataset& train, std::span<const Cell> query,
                               std::span<const double> factors = {}) {
  if (train.n_rows() == 0) throw UsageError("knn: empty training set");
  const DistanceModel model(train);
  double best = 0.0;
  std::size_t best_idx = 0;
  bool have = false;
  for (std::size_t j = 0; j < train.n_rows(); ++j) {
    const double dist = model.distance_to(query, j, factors);
    if (!have || dist < best) {
      have = true;
      best = dist;
      best_idx = j;
    }
  }
  return train.label_of(best_idx);
}

struct CurvePoint {
  std::size_t n_features = 0;
  std::vector<std::string> features;  // the weight-ranked prefix in use
  double accuracy = 0.0;              // mean fold accuracy, percent
};

struct CvCurve {
  std::vector<CurvePoint> points;
  int folds = 0;
  bool stratified = true;  // false when some class was too small and the
                           // fold split fell back to plain shuffling
};

// Accuracy of the 1-NN classifier restricted to the top-n weighted features,
// for every prefix length n, under seeded k-fold cross-validation. Folds are
// stratified per class unless a class has fewer members than folds.
inline CvCurve cv_curve(const Dataset& d, const FeatureWeights& w, int folds = 5,
                        std::uint64_t seed = 0) {
  if (folds < 2) throw UsageError("cv: need at least two folds");
  if (d.n_rows() < static_cast<std::size_t>(folds))
    throw UsageError("cv: more folds than instances");
  for (const auto& fs : d.schema)
    if (!w.weights.count(fs.name)) throw UsageError("cv: no weight for feature " + fs.name);

  // Ranked feature prefix per curve point, restricted to dataset features.
  std::vector<std::size_t> ranked;
  {
    std::vector<std::size_t> idx(d.n_features());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return w.weights.at(d.schema[a].name) > w.weights.at(d.schema[b].name);
    });
    ranked = std::move(idx);
  }

  CvCurve curve;
  curve.folds = folds;

  // Fold assignment; one Rng drives both strategies.
  std::vector<int> fold_of(d.n_rows(), 0);
  {
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> by_class(d.class_values.size());
    for (std::size_t i = 0; i < d.n_rows(); ++i)
      by_class[static_cast<std::size_t>(d.labels[i])].push_back(i);
    for (const auto& members : by_class)
      if (members.size() < static_cast<std::size_t>(folds)) curve.stratified = false;
    if (curve.stratified) {
      for (auto& members : by_class) {
        rng.shuffle(members);
        for (std::size_t p = 0; p < members.size(); ++p)
          fold_of[members[p]] = static_cast<int>(p % static_cast<std::size_t>(folds));
      }
    } else {
      std::vector<std::size_t> all(d.n_rows());
      std::iota(all.begin(), all.end(), std::size_t{0});
      rng.shuffle(all);
      for (std::size_t p = 0; p < all.size(); ++p)
        fold_of[all[p]] = static_cast<int>(p % static_cast<std::size_t>(folds));
    }
  }

  const DistanceModel model(d);
  std::vector<double> mask(d.n_features(), 0.0);
  for (std::size_t n = 1; n <= d.n_features(); ++n) {
    mask[ranked[n - 1]] = 1.0;
    double acc_sum = 0.0;
    for (int fold = 0; fold < folds; ++fold) {
      std::size_t total = 0, correct = 0;
      for (std::size_t q = 0; q < d.n_rows(); ++q) {
        if (fold_of[q] != fold) continue;
        ++total;
        double best = 0.0;
        std::size_t best_idx = 0;
        bool have = false;
        for (std::size_t j = 0; j < d.n_rows(); ++j) {
          if (fold_of[j] == fold) continue;
          const double dist = model.distance(q, j, mask);
          if (!have || dist < best) {
            have = true;
            best = dist;
            best_idx = j;
          }
        }
        if (have && d.labels[best_idx] == d.labels[q]) ++correct;
      }
      if (total > 0) acc_sum += static_cast<double>(correct) / static_cast<double>(total);
    }
    CurvePoint pt;
    pt.n_features = n;
    for (std::size_t i = 0; i < n; ++i) pt.features.push_back(d.schema[ranked[i]].name);
    pt.accuracy = 100.0 * acc_sum / static_cast<double>(folds);
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

}  // namespace relieve
