#include <cmath>

#include <gtest/gtest.h>

#include "conleygp/confidence.hpp"
#include "conleygp/error.hpp"
#include "conleygp/rng.hpp"
#include "oracles.hpp"

using namespace conleygp;

namespace {

double bisect(const std::function<double(double)>& f, double target, double lo, double hi) {
  for (int i = 0; i < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double erf_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST(NormalQuantile, Values) {
  EXPECT_EQ(normal_quantile(0.5), 0.0);
  const double oracle = bisect(erf_cdf, 0.975, 0, 10);
  EXPECT_NEAR(oracle, 1.959963985, 1e-9);
  EXPECT_NEAR(normal_quantile(0.975), oracle, 1e-12);
}

TEST(NormalQuantile, Antisymmetric) {
  Rng r(3);
  for (int i = 0; i < 100; ++i) {
    const double p = r.uniform(1e-6, 1 - 1e-6);
    EXPECT_NEAR(normal_quantile(p), -normal_quantile(1 - p), 1e-12);
  }
}

TEST(NormalQuantile, TailAndMonotone) {
  double prev = -INFINITY;
  for (int i = 1; i < 2000; ++i) {
    const double p = i / 2000.0;
    const double q = normal_quantile(p);
    EXPECT_GT(q, prev);
    prev = q;
  }
  for (double p : {1e-300, 1e-100, 1e-20, 1e-10}) {
    const double q = normal_quantile(p);
    EXPECT_NEAR(0.5 * std::erfc(-q / std::sqrt(2.0)) / p, 1.0, 1e-12);
  }
  EXPECT_THROW(normal_quantile(0.0), ConfigError);
  EXPECT_THROW(normal_quantile(1.0), ConfigError);
}

TEST(Chi2, ClosedFormCases) {
  EXPECT_NEAR(chi2_quantile(2, 0.95), -2 * std::log(0.05), 1e-9);
  EXPECT_NEAR(chi2_quantile(2, 0.95), 5.991464547, 1e-8);
  EXPECT_NEAR(chi2_quantile(1, 0.95), std::pow(normal_quantile(0.975), 2), 1e-9);
  EXPECT_NEAR(chi2_quantile(1, 0.95), 3.841458821, 1e-8);
}

TEST(Chi2, OneDofIdentity) {
  Rng r(4);
  for (int i = 0; i < 50; ++i) {
    const double p = r.uniform(0.01, 0.999);
    const double z = normal_quantile((1 + p) / 2);
    EXPECT_NEAR(chi2_quantile(1, p), z * z, 1e-8 * z * z);
  }
}

TEST(Chi2, CdfMatchesClosedFormOracle) {
  for (int k = 1; k <= 30; ++k)
    for (double x : {0.01, 0.5, 1.0, 3.0, 7.5, 20.0, 45.0}) {
      EXPECT_NEAR(chi2_cdf(k, x), oracle::chi2_cdf_closed(k, x), 1e-12) << k << " " << x;
    }
}

TEST(Chi2, QuantileInvertsCdfOnGrid) {
  double worst = 0;
  for (int k = 1; k <= 20; ++k)
    for (int j = 1; j <= 50; ++j) {
      const double p = j / 51.0;
      const double q = chi2_quantile(k, p);
      const double ref = bisect([&](double x) { return oracle::chi2_cdf_closed(k, x); }, p, 0, 500);
      worst = std::max(worst, std::abs(q - ref) / ref);
    }
  EXPECT_LE(worst, 1e-8);
}

TEST(Chi2, MonotoneInP) {
  for (int k : {1, 3, 10}) {
    double prev = 0;
    for (int i = 1; i < 500; ++i) {
      const double q = chi2_quantile(k, i / 500.0);
      EXPECT_GT(q, prev);
      prev = q;
    }
  }
}

TEST(Budget, EvenSplit) {
  const auto b = ConfidenceBudget::even_split(0.05);
  EXPECT_DOUBLE_EQ(b.lipschitz_share, std::sqrt(0.95));
  EXPECT_DOUBLE_EQ(b.pointwise_share, std::sqrt(0.95));
  EXPECT_NEAR(b.lipschitz_share * b.pointwise_share, 0.95, 1e-15);
  EXPECT_THROW(ConfidenceBudget::even_split(1.5), ConfigError);
}

TEST(Allocate, UniformTwoFiftySix) {
  std::vector<double> mids(256);
  for (int i = 0; i < 256; ++i) mids[i] = i;
  const auto r = allocate(ConfidenceBudget::even_split(0.05), mids);
  const double dv = (1 - std::sqrt(0.95)) / 256;
  EXPECT_NEAR(dv, 9.891e-5, 1e-8);
  for (double d : r.delta) EXPECT_NEAR(d, dv, 1e-18);
  // two-sided tail mass at z is erfc(z / sqrt 2); z = 3.8933
  EXPECT_NEAR(std::erfc(r.z[0] / std::sqrt(2.0)), dv, 1e-12 * dv);
  EXPECT_NEAR(r.z[0], 3.8933, 1e-4);
}

TEST(Allocate, SinglePoint) {
  const std::vector<double> mids{0.5};
  const auto r = allocate(ConfidenceBudget::with_lipschitz_share(0.05, 0.999), mids);
  EXPECT_NEAR(r.delta[0], 1 - 0.95 / 0.999, 1e-15);
  EXPECT_NEAR(std::erfc(r.z[0] / std::sqrt(2.0)), r.delta[0], 1e-12);
}

TEST(Allocate, WeightScaleInvariantAndUnionBound) {
  Rng rng(8);
  std::vector<double> mids(100), w(100), w2(100);
  for (int i = 0; i < 100; ++i) {
    mids[i] = i / 100.0;
    w[i] = rng.uniform(0.1, 3.0);
    w2[i] = 2 * w[i];
  }
  const auto b = ConfidenceBudget::even_split(0.05);
  const auto a = allocate(b, mids, w), c = allocate(b, mids, w2);
  double sum = 0;
  for (int i = 0; i < 100; ++i) {
    EXPECT_NEAR(a.z[i], c.z[i], 1e-12);
    sum += a.delta[i];
  }
  EXPECT_LE(sum, 1 - b.pointwise_share + 1e-15);
  // smaller failure mass, larger multiplier
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j)
      if (a.delta[i] < a.delta[j]) EXPECT_GT(a.z[i], a.z[j]);
}

TEST(Allocate, UnionBoundNoLessConservativeThanExponentRule) {
  const double delta = 1 - std::sqrt(0.95);
  for (int n = 1; n <= (1 << 15); n *= 2) EXPECT_LE(delta / n, 1 - std::pow(1 - delta, 1.0 / n) + 1e-18);
}

TEST(RegionWeights, LaterRegionsOverride) {
  const std::vector<double> mids{0.1, 0.4, 0.6, 0.9};
  const std::vector<RegionWeight> regions{{0.0, 0.5, 2.0}, {0.35, 0.65, 5.0}};
  const auto w = region_weights(mids, regions);
  EXPECT_EQ(w, (std::vector<double>{2.0, 5.0, 5.0, 1.0}));
}
