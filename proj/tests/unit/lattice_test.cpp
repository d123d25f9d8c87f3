#include <gtest/gtest.h>

#include <random>

#include "dirmix/errors.hpp"
#include "dirmix/lattice.hpp"
#include "oracles.hpp"

using namespace dirmix;
using oracle::q;

namespace {

StripSpec strip2(const Scalar& beta, const Scalar& b) { return StripSpec(DirectionVector{beta}, {b}); }

std::vector<LatticePoint> pts(std::initializer_list<std::pair<std::int64_t, std::int64_t>> list) {
  std::vector<LatticePoint> out;
  for (auto [m, n] : list) out.push_back(LatticePoint{m, n});
  return out;
}

}  // namespace

TEST(StripContains, Examples) {
  EXPECT_TRUE(strip_contains(strip2(0, 2), {5, 1}));
  EXPECT_TRUE(strip_contains(strip2(1, q(1, 2)), {3, 3}));
  EXPECT_FALSE(strip_contains(strip2(1, q(1, 2)), {3, 4}));
  // 13^2 <= 200 <= 15^2 puts 7 within 1/2 of 5 sqrt(2).
  EXPECT_TRUE(strip_contains(strip2(Scalar::sqrt(2), 1), {5, 7}));
  EXPECT_FALSE(strip_contains(strip2(Scalar::sqrt(2), 1), {5, 8}));
}

TEST(StripContains, BoundsAreInclusive) {
  EXPECT_TRUE(strip_contains(strip2(0, 2), {0, 1}));
  EXPECT_TRUE(strip_contains(strip2(0, 2), {0, -1}));
  EXPECT_FALSE(strip_contains(strip2(0, 2), {0, 2}));
  EXPECT_TRUE(strip_contains(strip2(q(1, 2), 1), {1, 0}));
  EXPECT_TRUE(strip_contains(strip2(q(1, 2), 1), {1, 1}));
}

TEST(StripContains, DimensionMismatchThrows) {
  EXPECT_THROW(strip_contains(strip2(0, 1), LatticePoint{1, 2, 3}), InvalidArgument);
}

TEST(StripSpec, RejectsNonPositiveWidth) {
  EXPECT_THROW(strip2(0, 0), InvalidArgument);
  EXPECT_THROW(strip2(0, -1), InvalidArgument);
  EXPECT_THROW(StripSpec(DirectionVector{Scalar(0)}, {Scalar(1), Scalar(1)}), InvalidArgument);
}

TEST(EnumerateStrip, Examples) {
  // Width zero is rejected, so the exact diagonal uses a width below 1.
  EXPECT_EQ(enumerate_strip(strip2(1, q(1, 2)), 3), pts({{0, 0}, {1, 1}, {2, 2}}));
  EXPECT_EQ(enumerate_strip(strip2(q(1, 2), 1), 2), pts({{0, 0}, {1, 0}, {1, 1}}));
  EXPECT_EQ(enumerate_strip(strip2(0, 2), 1), pts({{0, -1}, {0, 0}, {0, 1}}));
}

TEST(EnumerateStrip, ThreeDimensionalBox) {
  const StripSpec s(DirectionVector{Scalar(1), q(1, 2)}, {Scalar(1), Scalar(2)});
  const auto all = enumerate_strip(s, 4);
  std::vector<LatticePoint> brute;
  for (std::int64_t m = 0; m < 4; ++m) {
    for (std::int64_t a = -10; a <= 10; ++a) {
      for (std::int64_t c = -10; c <= 10; ++c) {
        if (oracle::rational_strip_contains(1, 1, 1, 1, m, a) &&
            oracle::rational_strip_contains(1, 2, 2, 1, m, c)) {
          brute.push_back(LatticePoint{m, a, c});
        }
      }
    }
  }
  EXPECT_EQ(all, brute);
  EXPECT_EQ(strip_cardinality(s, 4), Integer(static_cast<long>(brute.size())));
}

TEST(StripCardinality, Examples) {
  EXPECT_EQ(strip_cardinality(strip2(1, 2), 10), Integer(30));
  EXPECT_EQ(strip_cardinality(strip2(1, 2), 10),
            Integer(static_cast<long>(enumerate_strip(strip2(1, 2), 10).size())));
}

TEST(StripDensity, RationalSlopeIsPeriodic) {
  const StripSpec s = strip2(q(3, 7), q(1, 7));
  const auto period = oracle::brute_strip(3, 7, 1, 7, 7, 20);
  for (long reps : {1L, 2L, 5L}) {
    EXPECT_EQ(strip_density(s, 7 * reps), Rational(static_cast<long>(period.size())) / 7);
  }
  for (std::int64_t m = 0; m < 7; ++m) {
    EXPECT_EQ(column_cardinality(s, m), column_cardinality(s, m + 7));
    EXPECT_EQ(column_cardinality(s, m), column_cardinality(s, m + 70));
  }
}

TEST(StripDensity, IrrationalSlopesConvergeToWidth) {
  for (const char* beta : {"sqrt(2)", "sqrt(3)", "1/2 + 1/2*sqrt(5)"}) {
    const Rational d = strip_density(strip2(Scalar::parse(beta), q(1, 2)), 100000);
    EXPECT_NEAR(d.get_d(), 0.5, 0.01) << beta;
  }
}

TEST(RelativeDensity, FullStripIsOne) {
  const StripSpec s = strip2(Scalar::sqrt(3), q(3, 2));
  const auto all = enumerate_strip(s, 40);
  EXPECT_EQ(relative_density(all, s, 40), Rational(1));
}

TEST(RelativeDensity, EveryOtherDiagonalPoint) {
  const StripSpec s = strip2(1, q(1, 2));
  std::vector<LatticePoint> even;
  for (std::int64_t m = 0; m < 100; m += 2) even.push_back(LatticePoint{m, m});
  for (std::int64_t k : {2, 10, 50, 100}) EXPECT_EQ(relative_density(even, s, k), q(1, 2));
}

TEST(RelativeDensity, OutsidePointThrows) {
  const StripSpec s = strip2(1, q(1, 2));
  const std::vector<LatticePoint> bad{{0, 0}, {3, 5}};
  try {
    relative_density(bad, s, 10);
    FAIL() << "expected a throw";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("(3,5)"), std::string::npos) << e.what();
  }
}

TEST(Sumset, Examples) {
  const Scalar b9 = 9, thin = q(1, 10);
  EXPECT_TRUE(sumset_covers_window(strip2(0, b9), strip2(1, b9), 20).covers);
  // Thin strips of slopes 0 and 1 are Z x {0} and the diagonal, and
  // (x, y) = (x - y, 0) + (y, y), so they still cover.
  EXPECT_TRUE(sumset_covers_window(strip2(0, thin), strip2(1, thin), 20).covers);
  // Slopes 1/2 and -1/2 give (2k, k) + (2j, -j): x is even and y = x/2 mod 2.
  const auto r = sumset_covers_window(strip2(q(1, 2), thin), strip2(q(-1, 2), thin), 20);
  EXPECT_FALSE(r.covers);
  ASSERT_TRUE(r.uncovered.has_value());
  EXPECT_FALSE(sumset_covers_window(strip2(1, 3), strip2(1, 3), 5).covers);
}

// Brute force: target (x, y) is a sum when some summand column m has
// p1 = (m, n1) in V and (x - m, y - n1) in W. Slopes p/q, widths r/s.
TEST(Sumset, AgreesWithBruteForce) {
  struct Case {
    std::int64_t p1, q1, p2, q2, r, s, window;
  };
  const Case cases[] = {{0, 1, 1, 1, 1, 1, 6},  {0, 1, 1, 1, 2, 1, 6},  {0, 1, 1, 1, 3, 1, 6},
                        {0, 1, 1, 1, 9, 1, 8},  {1, 2, 1, 1, 4, 1, 6},  {-1, 1, 1, 1, 2, 1, 6},
                        {0, 1, 2, 1, 5, 2, 5},  {1, 3, 2, 3, 7, 1, 6},  {0, 1, 1, 1, 1, 10, 4}};
  for (const auto& c : cases) {
    const StripSpec V = strip2(q(c.p1, c.q1), q(c.r, c.s));
    const StripSpec W = strip2(q(c.p2, c.q2), q(c.r, c.s));
    const std::int64_t M = 60;
    bool covers = true;
    for (std::int64_t x = -c.window; x <= c.window && covers; ++x) {
      for (std::int64_t y = -c.window; y <= c.window && covers; ++y) {
        bool hit = false;
        for (std::int64_t m = -M; m <= M && !hit; ++m) {
          for (std::int64_t n1 = -3 * M; n1 <= 3 * M && !hit; ++n1) {
            hit = oracle::rational_strip_contains(c.p1, c.q1, c.r, c.s, m, n1) &&
                  oracle::rational_strip_contains(c.p2, c.q2, c.r, c.s, x - m, y - n1);
          }
        }
        covers = hit;
      }
    }
    EXPECT_EQ(sumset_covers_window(V, W, c.window).covers, covers)
        << c.p1 << "/" << c.q1 << " " << c.p2 << "/" << c.q2 << " b=" << c.r << "/" << c.s;
  }
}

TEST(LatticeProperty, EnumerationMatchesBruteForce) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = oracle::uniform(rng, -9, 9);
    const auto qq = oracle::uniform(rng, 1, 9);
    const auto r = oracle::uniform(rng, 1, 12);
    const auto s = oracle::uniform(rng, 1, 5);
    const auto k = oracle::uniform(rng, 1, 50);
    const StripSpec spec = strip2(q(p, qq), q(r, s));
    const auto brute = oracle::brute_strip(p, qq, r, s, k, 9 * 50 + 20);
    EXPECT_EQ(enumerate_strip(spec, k), brute) << spec.to_string() << " k=" << k;
    EXPECT_EQ(strip_cardinality(spec, k), Integer(static_cast<long>(brute.size())));
  }
}

TEST(LatticeProperty, CardinalityIsMonotoneInWidth) {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const Scalar beta(oracle::q(oracle::uniform(rng, -20, 20), oracle::uniform(rng, 1, 7)),
                      oracle::q(oracle::uniform(rng, -5, 5), oracle::uniform(rng, 1, 7)), 2);
    const Scalar b1(oracle::q(oracle::uniform(rng, 1, 40), oracle::uniform(rng, 1, 8)));
    const Scalar b2 = b1 + Scalar(oracle::q(oracle::uniform(rng, 0, 20), oracle::uniform(rng, 1, 8)));
    const auto k = oracle::uniform(rng, 1, 300);
    EXPECT_LE(strip_cardinality(strip2(beta, b1), k), strip_cardinality(strip2(beta, b2), k));
  }
}

TEST(LatticeProperty, WidthAtLeastOneGivesOnePointPerColumn) {
  std::mt19937_64 rng(303);
  const std::int64_t radicands[] = {0, 2, 3, 5, 7};
  for (int trial = 0; trial < 200; ++trial) {
    const Scalar beta(oracle::q(oracle::uniform(rng, -30, 30), oracle::uniform(rng, 1, 11)),
                      oracle::q(oracle::uniform(rng, -9, 9), oracle::uniform(rng, 1, 11)),
                      radicands[trial % 5]);
    const Scalar b = Scalar(1) + Scalar(oracle::q(oracle::uniform(rng, 0, 30), oracle::uniform(rng, 1, 10)));
    const auto k = oracle::uniform(rng, 1, 1000);
    EXPECT_GE(strip_cardinality(strip2(beta, b), k), Integer(k)) << beta << " " << b;
  }
}
