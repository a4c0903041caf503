#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "conleygp/dataio.hpp"
#include "conleygp/error.hpp"
#include "conleygp/rng.hpp"

using namespace conleygp;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, StreamsAreIndependentOfOrder) {
  Rng s3 = Rng::stream(7, 3);
  const auto first = s3.next();
  Rng s1 = Rng::stream(7, 1);
  (void)s1.next();
  EXPECT_EQ(Rng::stream(7, 3).next(), first);
  EXPECT_NE(Rng::stream(7, 1).next(), first);
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(1);
  double lo = 1, hi = 0, sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, NormalMoments) {
  Rng r(9);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
}

TEST(Domain, RejectsEmptyOrInfinite) {
  EXPECT_THROW(Domain::make(1.0, 1.0), ConfigError);
  EXPECT_THROW(Domain::make(2.0, 1.0), ConfigError);
  EXPECT_THROW(Domain::make(0.0, INFINITY), ConfigError);
}

TEST(Csv, ParsesTwoRows) {
  const auto d = parse_csv("x,y\n0.5,0.5\n0.1,0.2", Domain::make(0, 1));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.points()[0], (Point{0.5, 0.5}));
  EXPECT_EQ(d.points()[1], (Point{0.1, 0.2}));
}

TEST(Csv, RejectsOutOfDomain) {
  EXPECT_THROW(parse_csv("x,y\n1.5,0.2\n0.1,0.2\n", Domain::make(0, 1)), DataError);
}

TEST(Csv, RejectsDuplicates) {
  EXPECT_THROW(parse_csv("x,y\n0.3,0.2\n0.3,0.4\n", Domain::make(0, 1)), DataError);
}

TEST(Csv, MalformedRowNamesLine) {
  try {
    parse_csv("x,y\n0.1,0.2\n0.2;0.3\n", Domain::make(0, 1));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Csv, RoundTripsThroughFile) {
  const auto d = generate({Logistic{3.5}, 6, 11}, Domain::make(0, 1));
  const auto path = std::filesystem::temp_directory_path() / "conleygp_roundtrip.csv";
  write_csv(path, d);
  const auto back = load_csv(path, d.domain());
  EXPECT_EQ(back.points(), d.points());
  std::filesystem::remove(path);
}

TEST(Generate, LogisticSatisfiesDefiningRelation) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto d = generate({Logistic{3.15}, 4, s}, Domain::make(0, 1));
    ASSERT_EQ(d.size(), 4u);
    for (const auto& p : d.points()) EXPECT_EQ(p.y, 3.15 * p.x * (1 - p.x));
  }
}

TEST(Generate, Deterministic) {
  const SyntheticSpec spec{GaussBump{2, 5, 1}, 10, 123};
  const auto dom = Domain::make(-0.2, 2.3);
  EXPECT_EQ(generate(spec, dom).points(), generate(spec, dom).points());
  EXPECT_EQ(format_csv(generate(spec, dom)), format_csv(generate(spec, dom)));
}

TEST(Generate, ArctanSigmoidMatchesFormula) {
  const ArctanSigmoid f{0.3, 8, 4, 0.5};
  for (double x : {0.0, 0.125, 0.3, 0.5, 0.77, 1.0}) {
    EXPECT_DOUBLE_EQ(evaluate(f, x), 0.3 * std::atan(8 * x - 4) + 0.5);
  }
  // 0.3 atan(8x - 4) + 0.5 at x = 0.5 is exactly the offset
  EXPECT_EQ(evaluate(f, 0.5), 0.5);
}

TEST(Generate, TableInterpolatesAndClamps) {
  const TableFunction t{{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}}};
  EXPECT_DOUBLE_EQ(evaluate(t, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(t, 0.75), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(t, -1.0), 0.0);
  EXPECT_THROW(validate({TableFunction{{{0.5, 0}, {0.1, 1}}}, 4, 0}), ConfigError);
}

TEST(Generate, RejectsTooFewSamples) { EXPECT_THROW(validate({Logistic{3}, 1, 0}), ConfigError); }

TEST(CoveringRadius, HandCases) {
  const auto dom = Domain::make(0, 1);
  const std::vector<double> a{0, 0.5, 1}, b{0.5}, c{0.1, 0.4, 0.9};
  EXPECT_DOUBLE_EQ(covering_radius(a, dom), 0.25);
  EXPECT_DOUBLE_EQ(covering_radius(b, dom), 0.5);
  EXPECT_NEAR(covering_radius(c, dom), 0.25, 1e-15);
}

TEST(CoveringRadius, MatchesGridScan) {
  Rng r(5);
  const auto dom = Domain::make(-1, 2);
  const int grid = 1000000;
  const double h = dom.length() / grid;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(r.uniform() * 12);
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) xs.push_back(r.uniform(dom.lower, dom.upper));
    std::sort(xs.begin(), xs.end());
    double worst = 0;
    std::size_t j = 0;
    for (int g = 0; g <= grid; ++g) {
      const double z = dom.lower + g * h;
      while (j + 1 < xs.size() && xs[j + 1] <= z) ++j;
      double d = std::abs(z - xs[j]);
      if (j + 1 < xs.size()) d = std::min(d, std::abs(xs[j + 1] - z));
      worst = std::max(worst, d);
    }
    EXPECT_NEAR(covering_radius(xs, dom), worst, h) << "trial " << trial;
  }
}
