#include <cmath>

#include <gtest/gtest.h>

#include "conleygp/confidence.hpp"
#include "conleygp/enclosure.hpp"
#include "conleygp/gp.hpp"

using namespace conleygp;

namespace {

MidpointBand constant_band(const CellComplex1D& c, double lo, double hi) {
  MidpointBand b;
  b.midpoint = c.odd_midpoints();
  const std::size_t n = b.midpoint.size();
  b.mean.assign(n, 0.5 * (lo + hi));
  b.sd.assign(n, 0.0);
  b.z.assign(n, 1.0);
  b.lo.assign(n, lo);
  b.hi.assign(n, hi);
  return b;
}

Assembly bist_assembly(std::uint64_t seed, int B, double L = 8.0, double zscale = 1.0) {
  const auto dom = Domain::make(0, 1);
  const auto m = fit(generate({ArctanSigmoid{0.3, 8, 4, 0.5}, 8, seed}, dom), KernelConfig::defaults_for(dom));
  CellComplex1D c(dom, B);
  auto r = allocate(ConfidenceBudget::even_split(0.05), c.odd_midpoints());
  for (auto& z : r.z) z *= zscale;
  return assemble(m, c, r, L);
}

GpModel bist_model(std::uint64_t seed) {
  const auto dom = Domain::make(0, 1);
  return fit(generate({ArctanSigmoid{0.3, 8, 4, 0.5}, 8, seed}, dom), KernelConfig::defaults_for(dom));
}

// Q intervals rebuilt from the bands by the rules for e0, e_{2i} and e_{2i+1}.
std::vector<Interval> oracle_q(const MidpointBand& b, double eps, double L) {
  std::vector<Interval> q(2 * b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    q[2 * i + 1] = {b.lo[i] - eps * L / 2, b.hi[i] + eps * L / 2};
    if (i == 0) {
      q[0] = {b.lo[0] - 1.5 * eps * L, b.hi[0] + 1.5 * eps * L};
    } else {
      const double mlo = (b.lo[i - 1] + b.lo[i]) / 2, mhi = (b.hi[i - 1] + b.hi[i]) / 2;
      q[2 * i] = {mlo - eps * L, mhi + eps * L};
    }
  }
  return q;
}

}  // namespace

TEST(Fibers, ConstantBandValues) {
  const CellComplex1D c(Domain::make(0, 1), 9);
  const auto t = build_fibers(constant_band(c, 0.4, 0.6), c, 8.0);
  EXPECT_NEAR(t.q[4].lo, 0.384375, 1e-15);
  EXPECT_NEAR(t.q[4].hi, 0.615625, 1e-15);
  EXPECT_NEAR(t.q[0].lo, 0.4 - 1.5 * 8 / 512.0, 1e-15);
  EXPECT_NEAR(t.q[0].hi, 0.6 + 1.5 * 8 / 512.0, 1e-15);
  EXPECT_NEAR(t.q[0].lo, 0.376562, 1e-6);
  EXPECT_NEAR(t.q[0].hi, 0.623437, 1e-6);
  EXPECT_NEAR(t.q[3].lo, 0.3921875, 1e-15);
  EXPECT_NEAR(t.q[3].hi, 0.6078125, 1e-15);
  // odd images use the band itself
  EXPECT_EQ(t.image[3], c.locate_edges(0.4, 0.6));
}

TEST(Fibers, MatchOracleOnFittedBands) {
  for (std::uint64_t seed : {0, 4, 9}) {
    const auto a = bist_assembly(seed, 9);
    const auto& enc = a.enclosure;
    const auto q = oracle_q(enc.band(), enc.complex().epsilon(), 8.0);
    for (std::size_t e = 0; e < q.size(); ++e) {
      EXPECT_NEAR(enc.fibers().q[e].lo, q[e].lo, 1e-14);
      EXPECT_NEAR(enc.fibers().q[e].hi, q[e].hi, 1e-14);
    }
  }
}

TEST(Fibers, ImagesRelocateFromScratch) {
  const auto a = bist_assembly(4, 9);
  const auto& enc = a.enclosure;
  const auto& c = enc.complex();
  for (std::size_t e = 0; e < c.edge_count(); ++e) {
    const Interval src = e % 2 ? Interval{enc.band().lo[e / 2], enc.band().hi[e / 2]} : enc.fibers().q[e];
    auto want = c.locate_edges(src);
    if (want.empty()) continue;
    EXPECT_EQ(enc.g_range(e).first, want.first);
    EXPECT_EQ(enc.g_range(e).last, want.last);
  }
}

TEST(Fibers, AdjacentQOverlap) {
  const auto a = bist_assembly(4, 9);
  const auto& q = a.enclosure.fibers().q;
  for (std::size_t e = 0; e + 1 < q.size(); ++e) EXPECT_TRUE(q[e].intersects(q[e + 1])) << e;
}

TEST(Fibers, RayValidityReportsRequiredL) {
  const CellComplex1D c(Domain::make(0, 1), 4);
  auto b = constant_band(c, 0.4, 0.6);
  b.hi[3] = 0.9;  // jump of 0.3 between odd midpoints 2 and 3
  const double need = 0.3 / (2 * c.epsilon());
  EXPECT_NEAR(required_lipschitz(b, c), need, 1e-12);
  try {
    build_fibers(b, c, 2.0);
    FAIL();
  } catch (const RayValidityError& e) {
    EXPECT_EQ(e.odd_index(), 3u);
    EXPECT_NEAR(e.required_L(), need, 1e-12);
  }
  EXPECT_NO_THROW(build_fibers(b, c, need * 1.0001));
}

TEST(Fibers, MonotoneInL) {
  const CellComplex1D c(Domain::make(0, 1), 9);
  const auto band = bist_assembly(4, 9).enclosure.band();
  const auto a = build_fibers(band, c, 8.0), b = build_fibers(band, c, 12.0);
  for (std::size_t e = 0; e < a.size(); ++e) EXPECT_TRUE(b.q[e].contains(a.q[e]));
}

TEST(Fibers, MonotoneInZ) {
  const auto a = bist_assembly(4, 9, 8.0, 1.0), b = bist_assembly(4, 9, 8.0, 1.5);
  for (std::size_t e = 0; e < a.enclosure.fibers().size(); ++e)
    EXPECT_TRUE(b.enclosure.fibers().q[e].contains(a.enclosure.fibers().q[e]));
}

TEST(Bands, ArithmeticAndLinearity) {
  const auto m = bist_model(4);
  const CellComplex1D c(Domain::make(0, 1), 6);
  auto r = allocate(ConfidenceBudget::even_split(0.05), c.odd_midpoints());
  const auto b1 = build_bands(m, c, r);
  for (auto& z : r.z) z *= 2;
  const auto b2 = build_bands(m, c, r);
  for (std::size_t i = 0; i < b1.size(); ++i) {
    const auto p = m.predict(b1.midpoint[i]);
    EXPECT_DOUBLE_EQ(b1.mean[i], p.mean);
    EXPECT_NEAR(b1.hi[i] - b1.mean[i], b1.z[i] * p.sd(), 1e-15);
    EXPECT_NEAR(b2.hi[i] - b2.lo[i], 2 * (b1.hi[i] - b1.lo[i]), 1e-14);
  }
}

TEST(Bands, ZeroVarianceAtTrainingInput) {
  // an odd midpoint of the B = 2 complex on [0, 1] is 0.375
  const TrainingData d({{0.375, 0.4}, {0.875, 0.2}, {0.1, 0.3}}, Domain::make(0, 1));
  const auto m = GpModel::at_theta(d, 0.05, 1e-10);
  const CellComplex1D c(Domain::make(0, 1), 2);
  const auto b = build_bands(m, c, allocate(ConfidenceBudget::even_split(0.05), c.odd_midpoints()));
  EXPECT_NEAR(b.lo[0], 0.4, 1e-4);
  EXPECT_NEAR(b.hi[0], 0.4, 1e-4);
}

TEST(Diagnostics, DiameterBoundArithmetic) {
  const CellComplex1D c(Domain::make(0, 1), 9);
  const Enclosure enc(c, constant_band(c, 0.4, 0.6), build_fibers(constant_band(c, 0.4, 0.6), c, 8.0), 8.0);
  const auto d = diagnose(enc, bist_model(0));
  EXPECT_NEAR(d.ell, 0.2, 1e-15);
  EXPECT_NEAR(d.diameter_bound, 0.4703125, 1e-15);
  EXPECT_LT(d.max_fiber_diameter, d.diameter_bound);
}

TEST(Diagnostics, DiameterBoundHoldsOnFittedRuns) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    try {
      const auto a = bist_assembly(seed, 9);
      EXPECT_LT(a.diagnostics.max_fiber_diameter, a.diagnostics.diameter_bound) << seed;
    } catch (const RayValidityError&) {
    }
  }
}

TEST(Enclosure, EscapingBandsInvalidate) {
  const CellComplex1D c(Domain::make(0, 1), 5);
  const auto band = constant_band(c, 0.9, 0.99);
  const Enclosure enc(c, band, build_fibers(band, c, 8.0), 8.0);
  EXPECT_FALSE(enc.g_tilde_contained());
  const auto inside = constant_band(c, 0.4, 0.6);
  EXPECT_TRUE(Enclosure(c, inside, build_fibers(inside, c, 8.0), 8.0).g_tilde_contained());
}

TEST(Enclosure, MeanGraphInside) {
  const auto m = bist_model(4);
  const auto a = bist_assembly(4, 9);
  std::vector<Point> probe;
  const std::size_t n = std::size_t{1} << 11;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    probe.push_back({x, m.mean(x)});
  }
  EXPECT_TRUE(graph_inside(a.enclosure, probe).inside);
}

TEST(Enclosure, PointAboveFiberReported) {
  const auto a = bist_assembly(4, 9);
  const auto& enc = a.enclosure;
  const double x = enc.complex().edge_support(100).lo + 0.3 * enc.complex().epsilon();
  const Point bad{x, enc.fibers().q[100].hi + 1.0};
  const std::vector<Point> probe{{x, enc.band().mean[50]}, bad};
  const auto g = graph_inside(enc, probe);
  EXPECT_FALSE(g.inside);
  ASSERT_TRUE(g.violation.has_value());
  EXPECT_EQ(*g.violation, bad);
}

TEST(Enclosure, ProbeAgreesWithPointwiseRecheck) {
  const auto m = bist_model(7);
  const auto a = bist_assembly(7, 8);
  const auto& enc = a.enclosure;
  const auto& c = enc.complex();
  std::vector<double> xs;
  for (std::size_t i = 0; i < 512; ++i) xs.push_back(static_cast<double>(i) / 511);
  xs.back() = 1.0;
  const FiberProbe probe(enc, xs);
  const auto paths = sample_posterior_paths(m, xs, 200, 5);
  for (const auto& p : paths) {
    bool inside = true;
    for (std::size_t i = 0; i < xs.size() && inside; ++i) {
      bool any = false;
      for (std::size_t e = 0; e < c.edge_count(); ++e) {
        if (!c.edge_support(e).contains(xs[i])) continue;
        const auto& img = enc.g_range(e);
        const Interval ext{std::min(enc.fibers().q[e].lo, c.vertex(img.first)),
                           std::max(enc.fibers().q[e].hi, c.vertex(img.last + 1))};
        any = any || ext.contains(p[i]);
      }
      inside = any;
    }
    EXPECT_EQ(probe.contains(p), inside);
  }
}
