#pragma once

// Redundancy analysis over empirical joint distributions: conditional
// independence tests, Markov blanket checks, and a subset-swept redundancy
// level per feature.
//
// redundancy_level(alpha, U) = 1 - opt_S mean_u |P(a_u | s_u) - P(a_u | r_u)|
// where S sweeps the strict subsets of U - alpha (cardinality ascending,
// lexicographic within a cardinality), r_u is the configuration of every
// distribution variable except alpha, u sweeps values(alpha) x {r : P(r) > 0},
// and opt is min by default: the level reports the best subset's ability to
// screen alpha off from the rest. The worst-case max sweep is kept behind an
// option for comparison.
//
// The universe argument only selects which variables may appear inside a
// screening subset; the remainder r always spans the distribution's full
// variable set. Shrinking the universe therefore only shrinks the candidate
// pool, so removing a feature from the universe can never raise the level.
//
// For count-backed distributions conditional probabilities are compared by
// integer cross-multiplication, so exact independence is detected exactly:
// a true Markov blanket yields a level of exactly 1.0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "relieve/errors.hpp"
#include "relieve/probstats.hpp"

namespace relieve {

struct IndependenceQuery {
  std::vector<std::string> x;  // must be non-empty
  std::vector<std::string> y;
  std::vector<std::string> z;  // conditioning set; may be empty
  double tolerance = 0.0;
};

namespace detail {

// Count- or probability-valued mass with exact zero/equality semantics for
// the count-backed case.
struct Mass {
  unsigned long long count = 0;
  double prob = 0.0;
  bool exact = false;

  double value() const { return exact ? static_cast<double>(count) : prob; }
};

inline bool ratio_equal(const Mass& num1, const Mass& den1, const Mass& num2, const Mass& den2,
                        double tolerance) {
  if (num1.exact && den1.exact && num2.exact && den2.exact && tolerance == 0.0) {
    return static_cast<unsigned __int128>(num1.count) * den2.count ==
           static_cast<unsigned __int128>(num2.count) * den1.count;
  }
  const double a = den1.value() == 0.0 ? 0.0 : num1.value() / den1.value();
  const double b = den2.value() == 0.0 ? 0.0 : num2.value() / den2.value();
  return std::abs(a - b) <= tolerance;
}

struct ProjectedSupport {
  std::vector<std::size_t> positions;                    // pdm variable positions, given order
  std::map<std::vector<int>, Mass> mass;                 // projected config -> mass
};

inline std::vector<std::size_t> resolve_vars(const EmpiricalPDM& pdm,
                                             const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(pdm.var_index(n));
  return out;
}

inline ProjectedSupport project(const EmpiricalPDM& pdm, std::vector<std::size_t> positions) {
  ProjectedSupport ps;
  ps.positions = std::move(positions);
  if (pdm.count_backed()) {
    for (const auto& [cfg, n] : pdm.counts()) {
      std::vector<int> key;
      key.reserve(ps.positions.size());
      for (const auto p : ps.positions) key.push_back(cfg[p]);
      auto& m = ps.mass[key];
      m.exact = true;
      m.count += n;
    }
  } else {
    for (const auto& [cfg, pr] : pdm.support()) {
      std::vector<int> key;
      key.reserve(ps.positions.size());
      for (const auto p : ps.positions) key.push_back(cfg[p]);
      ps.mass[key].prob += pr;
    }
  }
  return ps;
}

inline Mass lookup(const std::map<std::vector<int>, Mass>& mass, const std::vector<int>& key,
                   bool exact) {
  const auto it = mass.find(key);
  if (it != mass.end()) return it->second;
  Mass zero;
  zero.exact = exact;
  return zero;
}

inline Mass lookup(const ProjectedSupport& ps, const std::vector<int>& key, bool exact) {
  return lookup(ps.mass, key, exact);
}

// All configurations of the given variable positions (mixed-radix count-up).
inline void for_each_config(const EmpiricalPDM& pdm, const std::vector<std::size_t>& positions,
                            const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cfg(positions.size(), 0);
  while (true) {
    fn(cfg);
    std::size_t i = 0;
    for (; i < positions.size(); ++i) {
      if (++cfg[i] < static_cast<int>(pdm.values(positions[i]).size())) break;
      cfg[i] = 0;
    }
    if (i == positions.size()) break;
  }
}

}  // namespace detail

// Is X independent of Y given Z? Checked pointwise: for every configuration
// with P(y, z) > 0 and every x-configuration,
// |P(x | y, z) - P(x | z)| <= tolerance.
inline bool conditionally_independent(const EmpiricalPDM& pdm, const IndependenceQuery& q) {
  if (q.x.empty()) throw UsageError("independence: x variable set is empty");
  if (q.y.empty()) return true;  // nothing to be dependent on
  {
    std::set<std::string> seen;
    for (const auto* group : {&q.x, &q.y, &q.z})
      for (const auto& n : *group)
        if (!seen.insert(n).second)
          throw UsageError("independence: variable " + n + " appears twice");
  }

  const auto xs = detail::resolve_vars(pdm, q.x);
  const auto ys = detail::resolve_vars(pdm, q.y);
  const auto zs = detail::resolve_vars(pdm, q.z);
  const bool exact = pdm.count_backed();

  auto concat = [](std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const auto yz = concat(ys, zs);
  const auto xyz = concat(xs, yz);
  const auto xz = concat(xs, zs);
  const auto s_yz = detail::project(pdm, yz);
  const auto s_xyz = detail::project(pdm, xyz);
  const auto s_xz = detail::project(pdm, xz);
  const auto s_z = detail::project(pdm, zs);

  bool ok = true;
  for (const auto& [yz_cfg, yz_mass] : s_yz.mass) {
    if (!ok) break;
    if (yz_mass.value() == 0.0) continue;
    const std::vector<int> z_cfg(yz_cfg.begin() + static_cast<std::ptrdiff_t>(ys.size()),
                                 yz_cfg.end());
    const auto z_mass = detail::lookup(s_z, z_cfg, exact);
    detail::for_each_config(pdm, xs, [&](const std::vector<int>& x_cfg) {
      if (!ok) return;
      std::vector<int> xyz_cfg = x_cfg;
      xyz_cfg.insert(xyz_cfg.end(), yz_cfg.begin(), yz_cfg.end());
      std::vector<int> xz_cfg = x_cfg;
      xz_cfg.insert(xz_cfg.end(), z_cfg.begin(), z_cfg.end());
      const auto num1 = detail::lookup(s_xyz, xyz_cfg, exact);
      const auto num2 = detail::lookup(s_xz, xz_cfg, exact);
      if (!detail::ratio_equal(num1, yz_mass, num2, z_mass, q.tolerance)) ok = false;
    });
  }
  return ok;
}

// S is a Markov blanket of alpha within the distribution's variable set U
// when alpha is independent of U - S - {alpha} given S. The full complement
// U - {alpha} is vacuously a blanket.
inline bool is_markov_blanket(const EmpiricalPDM& pdm, const std::string& alpha,
                              const std::vector<std::string>& s, double tolerance = 0.0) {
  pdm.var_index(alpha);  // validates the name
  std::set<std::string> in_s(s.begin(), s.end());
  if (in_s.count(alpha)) throw UsageError("blanket: alpha may not be in the candidate set");
  IndependenceQuery q;
  q.x = {alpha};
  q.z = s;
  q.tolerance = tolerance;
  for (const auto& v : pdm.variables())
    if (v != alpha && !in_s.count(v)) q.y.push_back(v);
  return conditionally_independent(pdm, q);
}

struct RedundancyOptions {
  std::size_t cap = 15;      // refuse larger universes unless forced
  bool force = false;
  bool worst_case = false;   // max over subsets instead of min
};

struct RedundancyResult {
  std::string feature;
  double level = 0.0;
  std::vector<std::string> best_subset;
  std::size_t evaluated_subsets = 0;
};

inline RedundancyResult redundancy_level(const EmpiricalPDM& pdm, const std::string& alpha,
                                         const std::vector<std::string>& universe,
                                         const RedundancyOptions& opt = {}) {
  if (universe.size() < 2)
    throw UsageError("redundancy: universe must contain alpha and at least one other variable");
  if (universe.size() > opt.cap && !opt.force)
    throw UsageError("redundancy: universe of " + std::to_string(universe.size()) +
                     " variables sweeps 2^" + std::to_string(universe.size() - 1) +
                     " subsets; pass force to proceed");
  {
    std::set<std::string> seen;
    for (const auto& v : universe) {
      pdm.var_index(v);
      if (!seen.insert(v).second) throw UsageError("redundancy: duplicate variable " + v);
    }
    if (!seen.count(alpha)) throw UsageError("redundancy: alpha must be in the universe");
  }

  // pool = universe - alpha: the variables a screening subset may use,
  // lexicographic for a deterministic sweep order.
  std::vector<std::string> pool;
  for (const auto& v : universe)
    if (v != alpha) pool.push_back(v);
  std::sort(pool.begin(), pool.end());

  // rest = every distribution variable but alpha; the remainder in the
  // comparison term, independent of the universe.
  std::vector<std::string> rest;
  for (const auto& v : pdm.variables())
    if (v != alpha) rest.push_back(v);
  std::sort(rest.begin(), rest.end());

  // Coordinate of each pool member inside a remainder configuration.
  std::vector<std::size_t> slot(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    slot[i] = static_cast<std::size_t>(
        std::lower_bound(rest.begin(), rest.end(), pool[i]) - rest.begin());

  const std::size_t a_pos = pdm.var_index(alpha);
  const auto rest_pos = detail::resolve_vars(pdm, rest);
  const bool exact = pdm.count_backed();

  // Aggregate masses over (rest) and (alpha, rest); the r-support defines
  // the configuration family the mean runs over, shared by every subset.
  auto s_rest = detail::project(pdm, rest_pos);
  std::vector<std::size_t> a_rest_pos{a_pos};
  a_rest_pos.insert(a_rest_pos.end(), rest_pos.begin(), rest_pos.end());
  auto s_a_rest = detail::project(pdm, a_rest_pos);

  std::vector<std::vector<int>> r_configs;
  for (const auto& [cfg, m] : s_rest.mass)
    if (m.value() > 0.0) r_configs.push_back(cfg);
  const std::size_t n_alpha = pdm.values(a_pos).size();
  const double n_terms = static_cast<double>(n_alpha * r_configs.size());

  // Subset masks in (cardinality, lexicographic-prefix) order. pool is
  // sorted, so iterating value combinations in lexicographic index order
  // matches name order.
  std::vector<std::vector<std::size_t>> masks;  // positions into pool
  const std::size_t nr = pool.size();
  for (std::size_t card = 0; card < nr; ++card) {  // strict subsets only
    std::vector<std::size_t> pick(card);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t depth) {
      if (depth == card) {
        masks.push_back(pick);
        return;
      }
      for (std::size_t i = from; i + (card - depth) <= nr; ++i) {
        pick[depth] = i;
        rec(i + 1, depth + 1);
      }
    };
    rec(0, 0);
  }

  RedundancyResult out;
  out.feature = alpha;
  bool have = false;
  double best_inner = 0.0;

  for (const auto& mask : masks) {
    ++out.evaluated_subsets;
    // Group the r-support by the S-projection.
    std::map<std::vector<int>, detail::Mass> den;
    std::map<std::vector<int>, detail::Mass> num;  // key: alpha value prepended
    for (const auto& [r_cfg, m] : s_rest.mass) {
      std::vector<int> key;
      key.reserve(mask.size());
      for (const auto i : mask) key.push_back(r_cfg[slot[i]]);
      auto& dm = den[key];
      dm.exact = m.exact;
      dm.count += m.count;
      dm.prob += m.prob;
    }
    for (const auto& [ar_cfg, m] : s_a_rest.mass) {
      std::vector<int> key{ar_cfg[0]};
      for (const auto i : mask) key.push_back(ar_cfg[1 + slot[i]]);
      auto& nm = num[key];
      nm.exact = m.exact;
      nm.count += m.count;
      nm.prob += m.prob;
    }

    double inner_sum = 0.0;
    bool all_equal = true;
    for (const auto& r_cfg : r_configs) {
      std::vector<int> s_key;
      s_key.reserve(mask.size());
      for (const auto i : mask) s_key.push_back(r_cfg[slot[i]]);
      const auto r_mass = detail::lookup(s_rest, r_cfg, exact);
      const auto den_mass = detail::lookup(den, s_key, exact);
      for (std::size_t a = 0; a < n_alpha; ++a) {
        std::vector<int> num_key{static_cast<int>(a)};
        num_key.insert(num_key.end(), s_key.begin(), s_key.end());
        std::vector<int> ar_key{static_cast<int>(a)};
        ar_key.insert(ar_key.end(), r_cfg.begin(), r_cfg.end());
        const auto n1 = detail::lookup(num, num_key, exact);
        const auto n2 = detail::lookup(s_a_rest, ar_key, exact);
        if (detail::ratio_equal(n1, den_mass, n2, r_mass, 0.0)) continue;
        all_equal = false;
        const double p1 = den_mass.value() == 0.0 ? 0.0 : n1.value() / den_mass.value();
        const double p2 = r_mass.value() == 0.0 ? 0.0 : n2.value() / r_mass.value();
        inner_sum += std::abs(p1 - p2);
      }
    }
    const double inner = all_equal ? 0.0 : inner_sum / n_terms;

    const bool better = !have || (opt.worst_case ? inner > best_inner : inner < best_inner);
    if (better) {
      have = true;
      best_inner = inner;
      out.best_subset.clear();
      for (const auto i : mask) out.best_subset.push_back(pool[i]);
      if (!opt.worst_case && inner == 0.0) break;  // a level-1.0 subset; nothing can beat it
    }
  }

  out.level = 1.0 - best_inner;
  return out;
}

// Dataset-facing wrapper: builds the joint over `universe` (feature names
// plus optionally the class column) and sweeps it.
inline RedundancyResult redundancy_level(const Dataset& d, const std::string& alpha,
                                         std::vector<std::string> universe,
                                         const RedundancyOptions& opt = {}) {
  if (universe.empty()) {
    for (const auto& fs : d.schema) universe.push_back(fs.name);
    universe.push_back(d.class_name);
  }
  const EmpiricalPDM pdm = EmpiricalPDM::from_dataset(d, universe);
  return redundancy_level(pdm, alpha, universe, opt);
}

}  // namespace relieve
