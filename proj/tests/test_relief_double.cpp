#include "relieve/relief_double.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "relieve/synth.hpp"
#include "oracles.hpp"

namespace relieve {
namespace {

// Straight-line transcription of the reweighting loop over the naive
// neighbor scan. Shares the seeded iteration order (contractual).
std::vector<double> naive_double(const Dataset& d, const ReliefConfig& cfg, DoubleVariant variant,
                                 ProgressiveSchedule sched = {}) {
  const std::size_t n = d.n_rows();
  const std::size_t m = cfg.m == 0 ? n : cfg.m;
  const double T = variant == DoubleVariant::kProgressive ? sched.exponent(m) : 0.0;

  std::vector<std::size_t> order;
  if (m == n) {
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(cfg.seed);
    rng.shuffle(order);
  } else {
    Rng rng(cfg.seed);
    for (std::size_t t = 0; t < m; ++t)
      order.push_back(static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1)));
  }

  std::vector<double> priors(d.class_values.size(), 0.0);
  for (const int l : d.labels) priors[static_cast<std::size_t>(l)] += 1.0;
  for (auto& p : priors) p /= double(n);

  std::vector<double> w(d.n_features(), 0.0);
  const double inv_m = 1.0 / double(m);
  for (std::size_t t = 0; t < order.size(); ++t) {
    std::vector<double> factors(w.size(), 0.0);
    bool any = false;
    for (std::size_t f = 0; f < w.size(); ++f) {
      const double raw = variant == DoubleVariant::kWeighted
                             ? w[f]
                             : (1.0 - w[f]) / std::pow(double(t + 1), T) + w[f];
      factors[f] = raw > 0.0 ? raw : 0.0;
      any = any || factors[f] > 0.0;
    }
    if (!any) factors.assign(w.size(), 1.0);

    const auto q = order[t];
    const auto nb = oracle::neighbors(d, q, cfg.k, factors);
    const auto own = static_cast<std::size_t>(d.labels[q]);
    if (!nb.hits.empty()) {
      const double scale = inv_m / double(nb.hits.size());
      for (const auto h : nb.hits)
        for (std::size_t f = 0; f < d.n_features(); ++f)
          w[f] -= scale * oracle::diff(d, f, q, h);
    }
    for (std::size_t c = 0; c < nb.by_class.size(); ++c) {
      if (c == own || nb.by_class[c].empty()) continue;
      const double scale = priors[c] / (1.0 - priors[own]) * inv_m / double(nb.by_class[c].size());
      for (const auto j : nb.by_class[c])
        for (std::size_t f = 0; f < d.n_features(); ++f)
          w[f] += scale * oracle::diff(d, f, q, j);
    }
  }
  for (auto& v : w) v = std::clamp(v, -1.0, 1.0);
  return w;
}

TEST(ProgressiveFactor, FirstIterationIsAlwaysOne) {
  Rng rng(301);
  for (int it = 0; it < 200; ++it) {
    const double w = rng.uniform_real() * 4.0 - 2.0;
    const double T = rng.uniform_real() * 5.0 + 0.01;
    EXPECT_DOUBLE_EQ(progressive_factor(w, 1, T), 1.0) << w << " " << T;
  }
  EXPECT_THROW(progressive_factor(0.5, 0, 1.0), UsageError);
}

TEST(ProgressiveFactor, DecaysTowardTheWeight) {
  const double w = 0.3;
  double prev = progressive_factor(w, 1, 1.0);
  for (std::size_t t = 2; t <= 64; t *= 2) {
    const double cur = progressive_factor(w, t, 1.0);
    EXPECT_LT(cur, prev);
    EXPECT_GT(cur, w);
    prev = cur;
  }
  EXPECT_NEAR(progressive_factor(w, 1000000, 1.0), w, 1e-5);
}

TEST(ProgressiveFactor, AutomaticExponentPinsTheFinalFactor) {
  // T = 2 / ln(m) makes the last factor f(w, m) = w + (1 - w) e^-2
  for (const std::size_t m : {std::size_t{2}, std::size_t{10}, std::size_t{10000}}) {
    ProgressiveSchedule sched;
    const double T = sched.exponent(m);
    for (const double w : {0.0, 0.25, 0.5, 0.9}) {
      const double expect = w + (1.0 - w) * std::exp(-2.0);
      EXPECT_NEAR(progressive_factor(w, m, T), expect, 1e-12) << m << " " << w;
    }
  }
}

TEST(ProgressiveSchedule, ExponentChoices) {
  ProgressiveSchedule automatic;
  EXPECT_NEAR(automatic.exponent(100), 2.0 / std::log(100.0), 1e-15);
  EXPECT_THROW(automatic.exponent(1), UsageError);

  ProgressiveSchedule fixed;
  fixed.automatic = false;
  fixed.T = 3.5;
  EXPECT_DOUBLE_EQ(fixed.exponent(1), 3.5);
}

TEST(DistanceFactors, ClampAndFallback) {
  const std::vector<double> running{0.5, -0.2, 0.0};
  const auto weighted = distance_factors(DoubleVariant::kWeighted, running, 3, 0.0);
  EXPECT_EQ(weighted, (std::vector<double>{0.5, 0.0, 0.0}));

  const std::vector<double> zeros{0.0, -1.0};
  EXPECT_EQ(distance_factors(DoubleVariant::kWeighted, zeros, 1, 0.0),
            (std::vector<double>{1.0, 1.0}));

  // progressive factors at t = 1 are pinned to one regardless of the weights
  const auto first = distance_factors(DoubleVariant::kProgressive, running, 1, 2.0);
  EXPECT_EQ(first, (std::vector<double>{1.0, 1.0, 1.0}));
}

TEST(DoubleRelief, SingleIterationMatchesThePlainEstimator) {
  const auto r = gen_modulo(2, 2, 3, 50, 13);
  ReliefConfig cfg;
  cfg.m = 1;
  cfg.k = 3;
  cfg.seed = 7;
  const auto plain = run_relief(r.data, cfg);
  const auto weighted = run_double_relief(r.data, cfg, DoubleVariant::kWeighted);
  ProgressiveSchedule fixed;
  fixed.automatic = false;
  fixed.T = 1.0;
  const auto progressive = run_double_relief(r.data, cfg, DoubleVariant::kProgressive, fixed);
  EXPECT_EQ(plain.weights, weighted.weights);
  EXPECT_EQ(plain.weights, progressive.weights);
}

TEST(DoubleRelief, MatchesTheNaiveTranscription) {
  Rng rng(307);
  for (int it = 0; it < 24; ++it) {
    oracle::RandomDataOptions opt;
    opt.min_rows = 8;
    opt.missing_rate = it % 4 == 0 ? 0.1 : 0.0;
    const Dataset d = oracle::random_dataset(rng, opt);

    ReliefConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(it);
    cfg.k = static_cast<std::size_t>(rng.uniform_int(1, 4));
    if (it % 2 == 0)
      cfg.m = static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(d.n_rows())));

    const auto variant = it % 4 < 2 ? DoubleVariant::kWeighted : DoubleVariant::kProgressive;
    ProgressiveSchedule sched;
    if (it % 4 == 3) {
      sched.automatic = false;
      sched.T = 0.5 + rng.uniform_real();
    }

    const auto got = run_double_relief(d, cfg, variant, sched);
    const auto want = naive_double(d, cfg, variant, sched);
    for (std::size_t f = 0; f < d.n_features(); ++f)
      ASSERT_NEAR(got.weights.at(d.schema[f].name), want[f], 1e-9) << it << ":" << f;
  }
}

TEST(DoubleRelief, ProvenanceAndParams) {
  const auto r = gen_modulo(2, 1, 2, 30, 1);
  ReliefConfig cfg;
  cfg.k = 2;
  const auto dw = run_double_relief(r.data, cfg, DoubleVariant::kWeighted);
  EXPECT_EQ(dw.algorithm, "drelieff");
  EXPECT_EQ(dw.params.at("m"), "30");
  EXPECT_EQ(dw.params.at("k"), "2");
  EXPECT_EQ(dw.params.count("T"), 0u);

  const auto pd = run_double_relief(r.data, cfg, DoubleVariant::kProgressive);
  EXPECT_EQ(pd.algorithm, "pdrelieff");
  EXPECT_EQ(pd.params.at("T"), "auto");

  ProgressiveSchedule fixed;
  fixed.automatic = false;
  fixed.T = 2.0;
  const auto pf = run_double_relief(r.data, cfg, DoubleVariant::kProgressive, fixed);
  EXPECT_EQ(pf.params.at("T"), "2");
}

TEST(DoubleRelief, Guards) {
  const auto r = gen_modulo(2, 1, 1, 10, 0);
  ReliefConfig cfg;
  cfg.m = 11;
  EXPECT_THROW(run_double_relief(r.data, cfg, DoubleVariant::kWeighted), UsageError);

  cfg.m = 0;
  cfg.k = 0;
  EXPECT_THROW(run_double_relief(r.data, cfg, DoubleVariant::kWeighted), UsageError);

  // automatic progressive exponent needs at least two iterations
  cfg.k = 1;
  cfg.m = 1;
  EXPECT_THROW(run_double_relief(r.data, cfg, DoubleVariant::kProgressive), UsageError);

  const Dataset one = parse_csv("x,class\n0,a\n", {{"x", FeatureKind::kNominal}});
  EXPECT_THROW(run_double_relief(one, ReliefConfig{}, DoubleVariant::kWeighted), UsageError);
}

TEST(DoubleRelief, WeightsStayInTheUnitBandAndRepeat) {
  Rng rng(311);
  for (int it = 0; it < 12; ++it) {
    oracle::RandomDataOptions opt;
    const Dataset d = oracle::random_dataset(rng, opt);
    ReliefConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(it);
    cfg.k = 3;
    const auto variant = it % 2 == 0 ? DoubleVariant::kWeighted : DoubleVariant::kProgressive;
    const auto a = run_double_relief(d, cfg, variant);
    const auto b = run_double_relief(d, cfg, variant);
    EXPECT_EQ(a.weights, b.weights);
    for (const auto& [name, v] : a.weights) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

}  // namespace
}  // namespace relieve
