#pragma once

// Probability plumbing: contingency tables, entropies (bits), mutual
// information, equal-width discretization, and empirical joint
// distributions over small variable sets.
//
// Missing cells are handled by pairwise deletion: a table over feature X
// simply drops rows where X is missing, and every marginal derived from
// that table stays coherent with it.

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "relieve/dataset.hpp"
#include "relieve/errors.hpp"

namespace relieve {

struct ContingencyTable {
  std::vector<std::string> feature_values;  // declared alphabet, may include zero columns
  std::vector<std::string> class_values;
  std::vector<std::vector<std::uint64_t>> counts;  // counts[class][value]
  std::vector<std::uint64_t> class_totals;
  std::vector<std::uint64_t> value_totals;
  std::uint64_t total = 0;
};

// Class-by-value counts for one nominal feature, missing rows excluded.
inline ContingencyTable contingency(const Dataset& d, std::size_t feature) {
  if (feature >= d.n_features()) throw UsageError("contingency: feature index out of range");
  const FeatureSchema& fs = d.schema[feature];
  if (fs.kind != FeatureKind::kNominal)
    throw UsageError("contingency: feature " + fs.name + " is linear; discretize it first");

  ContingencyTable t;
  t.feature_values = fs.values;
  t.class_values = d.class_values;
  t.counts.assign(d.class_values.size(), std::vector<std::uint64_t>(fs.values.size(), 0));
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    const Cell& c = d.rows[i][feature];
    if (c.missing) continue;
    ++t.counts[static_cast<std::size_t>(d.labels[i])][static_cast<std::size_t>(c.value)];
    ++t.total;
  }
  if (t.total == 0)
    throw UsageError("contingency: feature " + fs.name + " has no non-missing rows");
  t.class_totals.assign(t.class_values.size(), 0);
  t.value_totals.assign(t.feature_values.size(), 0);
  for (std::size_t c = 0; c < t.class_values.size(); ++c)
    for (std::size_t v = 0; v < t.feature_values.size(); ++v) {
      t.class_totals[c] += t.counts[c][v];
      t.value_totals[v] += t.counts[c][v];
    }
  return t;
}

// Equal-width binning over the observed range. The returned dataset has the
// feature replaced by a nominal one whose values are the occupied bin ids;
// missing cells stay missing. A constant feature lands in a single bin, the
// maximum lands in the last bin.
inline Dataset discretize(const Dataset& d, std::size_t feature, int bins = 10) {
  if (feature >= d.n_features()) throw UsageError("discretize: feature index out of range");
  if (bins < 1) throw UsageError("discretize: need at least one bin");
  const FeatureSchema& fs = d.schema[feature];
  if (fs.kind != FeatureKind::kLinear)
    throw UsageError("discretize: feature " + fs.name + " is already nominal");

  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    const Cell& c = d.rows[i][feature];
    if (c.missing) continue;
    if (!any) {
      lo = hi = c.value;
      any = true;
    } else {
      lo = std::min(lo, c.value);
      hi = std::max(hi, c.value);
    }
  }
  if (!any) throw UsageError("discretize: feature " + fs.name + " has no non-missing values");

  const double width = (hi - lo) / bins;
  std::vector<int> bin_of(d.n_rows(), -1);
  std::set<std::string> occupied;
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    const Cell& c = d.rows[i][feature];
    if (c.missing) continue;
    int b = 0;
    if (width > 0.0) b = std::min(bins - 1, static_cast<int>((c.value - lo) / width));
    bin_of[i] = b;
    occupied.insert(std::to_string(b));
  }

  Dataset out = d;
  FeatureSchema nf;
  nf.name = fs.name;
  nf.kind = FeatureKind::kNominal;
  nf.values.assign(occupied.begin(), occupied.end());
  out.schema[feature] = nf;
  for (std::size_t i = 0; i < out.n_rows(); ++i) {
    if (bin_of[i] < 0) continue;
    out.rows[i][feature].value = nf.value_index(std::to_string(bin_of[i]));
  }
  return out;
}

// Replaces every linear feature by its equal-width binning. Returns the
// names of the features that were converted.
inline std::vector<std::string> discretize_all(Dataset& d, int bins = 10) {
  std::vector<std::string> converted;
  for (std::size_t f = 0; f < d.n_features(); ++f)
    if (d.schema[f].kind == FeatureKind::kLinear) {
      d = discretize(d, f, bins);
      converted.push_back(d.schema[f].name);
    }
  return converted;
}

// Shannon entropy in bits. Zero entries contribute zero.
inline double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (const double p : probs) {
    if (p < -1e-12) throw UsageError("entropy: negative probability");
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

inline double class_entropy(const ContingencyTable& t) {
  std::vector<double> p;
  p.reserve(t.class_totals.size());
  for (const auto c : t.class_totals) p.push_back(static_cast<double>(c) / static_cast<double>(t.total));
  return entropy(p);
}

inline double feature_entropy(const ContingencyTable& t) {
  std::vector<double> p;
  p.reserve(t.value_totals.size());
  for (const auto v : t.value_totals) p.push_back(static_cast<double>(v) / static_cast<double>(t.total));
  return entropy(p);
}

inline double joint_entropy(const ContingencyTable& t) {
  std::vector<double> p;
  p.reserve(t.class_values.size() * t.feature_values.size());
  for (const auto& row : t.counts)
    for (const auto n : row) p.push_back(static_cast<double>(n) / static_cast<double>(t.total));
  return entropy(p);
}

// H(C|X) = sum_x P(x) H(C|X=x).
inline double conditional_class_entropy(const ContingencyTable& t) {
  double h = 0.0;
  for (std::size_t v = 0; v < t.feature_values.size(); ++v) {
    if (t.value_totals[v] == 0) continue;
    const double px = static_cast<double>(t.value_totals[v]) / static_cast<double>(t.total);
    std::vector<double> cond;
    cond.reserve(t.class_values.size());
    for (std::size_t c = 0; c < t.class_values.size(); ++c)
      cond.push_back(static_cast<double>(t.counts[c][v]) / static_cast<double>(t.value_totals[v]));
    h += px * entropy(cond);
  }
  return h;
}

// P(value | class) per class row; add-one smoothing on request. Unsmoothed
// conditionals for an empty class are all zero.
inline std::vector<std::vector<double>> value_given_class(const ContingencyTable& t,
                                                          bool laplace = false) {
  std::vector<std::vector<double>> p(t.class_values.size(),
                                     std::vector<double>(t.feature_values.size(), 0.0));
  const auto n_vals = static_cast<double>(t.feature_values.size());
  for (std::size_t c = 0; c < t.class_values.size(); ++c)
    for (std::size_t v = 0; v < t.feature_values.size(); ++v) {
      if (laplace) {
        p[c][v] = (static_cast<double>(t.counts[c][v]) + 1.0) /
                  (static_cast<double>(t.class_totals[c]) + n_vals);
      } else if (t.class_totals[c] > 0) {
        p[c][v] = static_cast<double>(t.counts[c][v]) / static_cast<double>(t.class_totals[c]);
      }
    }
  return p;
}

// Empirical joint distribution over a small ordered variable set. When the
// distribution comes from counted data the integer counts are kept, which
// lets downstream consumers compare conditional probabilities exactly
// (cross-multiplied integers instead of rounded quotients).
class EmpiricalPDM {
 public:
  using Config = std::vector<int>;

  EmpiricalPDM(std::vector<std::string> variables, std::vector<std::vector<std::string>> values,
               std::map<Config, std::uint64_t> counts)
      : vars_(std::move(variables)), values_(std::move(values)) {
    validate_shape();
    for (auto& [cfg, n] : counts) {
      check_config(cfg);
      if (n == 0) continue;
      counts_[cfg] = n;
      total_ += n;
    }
    if (total_ == 0) throw UsageError("pdm: empty support");
    for (const auto& [cfg, n] : counts_)
      probs_[cfg] = static_cast<double>(n) / static_cast<double>(total_);
  }

  // Probability-valued support for distributions that are not count-backed.
  EmpiricalPDM(std::vector<std::string> variables, std::vector<std::vector<std::string>> values,
               std::map<Config, double> probabilities)
      : vars_(std::move(variables)), values_(std::move(values)) {
    validate_shape();
    double sum = 0.0;
    for (auto& [cfg, p] : probabilities) {
      check_config(cfg);
      if (p < 0.0) throw UsageError("pdm: negative probability");
      if (p == 0.0) continue;
      probs_[cfg] = p;
      sum += p;
    }
    if (probs_.empty()) throw UsageError("pdm: empty support");
    if (std::abs(sum - 1.0) > 1e-9) throw UsageError("pdm: probabilities must sum to 1");
  }

  static EmpiricalPDM from_dataset(const Dataset& d, const std::vector<std::string>& variables) {
    if (variables.empty()) throw UsageError("pdm: no variables given");
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> values;
    std::vector<int> feature_of;  // -1 encodes the class column
    for (const auto& v : variables) {
      if (v == d.class_name) {
        feature_of.push_back(-1);
        values.push_back(d.class_values);
      } else {
        const int f = d.feature_index(v);
        if (f < 0) throw UsageError("pdm: unknown variable " + v);
        if (d.schema[static_cast<std::size_t>(f)].kind != FeatureKind::kNominal)
          throw UsageError("pdm: variable " + v + " is linear; discretize it first");
        feature_of.push_back(f);
        values.push_back(d.schema[static_cast<std::size_t>(f)].values);
      }
      names.push_back(v);
    }
    std::map<Config, std::uint64_t> counts;
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
      Config cfg(names.size());
      bool usable = true;
      for (std::size_t k = 0; k < names.size(); ++k) {
        if (feature_of[k] < 0) {
          cfg[k] = d.labels[i];
        } else {
          const Cell& c = d.rows[i][static_cast<std::size_t>(feature_of[k])];
          if (c.missing) {
            usable = false;
            break;
          }
          cfg[k] = static_cast<int>(c.value);
        }
      }
      if (usable) ++counts[cfg];
    }
    if (counts.empty()) throw UsageError("pdm: every row has a missing value in the variable set");
    return EmpiricalPDM(std::move(names), std::move(values), std::move(counts));
  }

  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<std::string>& values(std::size_t var) const { return values_[var]; }
  const std::map<Config, double>& support() const { return probs_; }
  bool count_backed() const { return total_ > 0; }
  std::uint64_t total() const { return total_; }
  const std::map<Config, std::uint64_t>& counts() const { return counts_; }

  std::size_t var_index(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return i;
    throw UsageError("pdm: unknown variable " + std::string(name));
  }

  double probability(const Config& cfg) const {
    const auto it = probs_.find(cfg);
    return it == probs_.end() ? 0.0 : it->second;
  }

  // Marginal over a subset of variable positions (ascending positions).
  EmpiricalPDM marginal(const std::vector<std::size_t>& positions) const {
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> vals;
    for (const auto p : positions) {
      names.push_back(vars_.at(p));
      vals.push_back(values_.at(p));
    }
    if (count_backed()) {
      std::map<Config, std::uint64_t> agg;
      for (const auto& [cfg, n] : counts_) {
        Config key;
        key.reserve(positions.size());
        for (const auto p : positions) key.push_back(cfg[p]);
        agg[key] += n;
      }
      return EmpiricalPDM(std::move(names), std::move(vals), std::move(agg));
    }
    std::map<Config, double> agg;
    for (const auto& [cfg, p] : probs_) {
      Config key;
      key.reserve(positions.size());
      for (const auto q : positions) key.push_back(cfg[q]);
      agg[key] += p;
    }
    return EmpiricalPDM(std::move(names), std::move(vals), std::move(agg));
  }

 private:
  void validate_shape() {
    if (vars_.empty()) throw UsageError("pdm: no variables");
    if (vars_.size() != values_.size()) throw UsageError("pdm: variable/value-list size mismatch");
    std::set<std::string> seen(vars_.begin(), vars_.end());
    if (seen.size() != vars_.size()) throw UsageError("pdm: duplicate variable");
    for (const auto& v : values_)
      if (v.empty()) throw UsageError("pdm: variable with empty alphabet");
  }

  void check_config(const Config& cfg) const {
    if (cfg.size() != vars_.size()) throw UsageError("pdm: configuration arity mismatch");
    for (std::size_t i = 0; i < cfg.size(); ++i)
      if (cfg[i] < 0 || static_cast<std::size_t>(cfg[i]) >= values_[i].size())
        throw UsageError("pdm: configuration value out of range");
  }

  std::vector<std::string> vars_;
  std::vector<std::vector<std::string>> values_;
  std::map<Config, double> probs_;
  std::map<Config, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// MI of a two-variable distribution, in bits: sum p(x,y) log2(p(x,y)/(p(x)p(y))).
inline double mutual_information(const EmpiricalPDM& pdm) {
  if (pdm.variables().size() != 2)
    throw UsageError("mutual_information: need exactly two variables");
  std::map<int, double> px, py;
  for (const auto& [cfg, p] : pdm.support()) {
    px[cfg[0]] += p;
    py[cfg[1]] += p;
  }
  double mi = 0.0;
  for (const auto& [cfg, p] : pdm.support())
    mi += p * std::log2(p / (px[cfg[0]] * py[cfg[1]]));
  return mi;
}

// Count-backed two-variable distribution straight from a contingency table.
inline EmpiricalPDM pdm_from_contingency(const ContingencyTable& t, const std::string& feature_name,
                                         const std::string& class_name) {
  std::map<EmpiricalPDM::Config, std::uint64_t> counts;
  for (std::size_t c = 0; c < t.class_values.size(); ++c)
    for (std::size_t v = 0; v < t.feature_values.size(); ++v)
      if (t.counts[c][v] > 0) counts[{static_cast<int>(v), static_cast<int>(c)}] = t.counts[c][v];
  return EmpiricalPDM({feature_name, class_name}, {t.feature_values, t.class_values},
                      std::move(counts));
}

}  // namespace relieve
