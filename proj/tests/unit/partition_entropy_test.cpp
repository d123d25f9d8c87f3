#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dirmix/errors.hpp"
#include "dirmix/partition_entropy.hpp"
#include "oracles.hpp"

using namespace dirmix;
using oracle::q;

namespace {

// 50-digit reference values.
constexpr double kLog2 = 0.69314718055994530941723212145817656807550013436025;
constexpr double kThirdTwoThirds = 0.63651416829481281845042382261707465926382380158258;

const std::vector<Rational> kHalf{q(1, 2), q(1, 2)};

StripSpec strip2(const Scalar& beta, const Scalar& b) { return StripSpec(DirectionVector{beta}, {b}); }

Partition zero_coordinate(const System& s) {
  return Partition::make(s, {s.parse_event({"(0,0)=0"}), s.parse_event({"(0,0)=1"})});
}

Partition right_zero(const System& s) {
  return Partition::make(s, {s.parse_event({"R0=0"}), s.parse_event({"R0=1"})});
}

// -sum p log p over exact atom measures, straight from the definition.
double direct_entropy(const std::vector<Rational>& masses) {
  long double h = 0;
  for (const auto& m : masses) {
    if (m == 0) continue;
    const long double p = m.get_d();
    h -= p * std::log(p);
  }
  return static_cast<double>(h);
}

}  // namespace

TEST(ShannonEntropy, Examples) {
  const System fair = System::bernoulli2d(kHalf);
  EXPECT_NEAR(shannon_entropy(zero_coordinate(fair)), kLog2, 1e-12);
  EXPECT_NEAR(shannon_entropy(zero_coordinate(fair), LogBase::kBits), 1.0, 1e-12);
  EXPECT_EQ(shannon_entropy(Partition::trivial()), 0.0);
  const System biased = System::bernoulli2d({q(1, 3), q(2, 3)});
  EXPECT_NEAR(shannon_entropy(zero_coordinate(biased)), kThirdTwoThirds, 1e-12);
}

TEST(Partition, RejectsOverlapAndDeficit) {
  const System s = System::bernoulli2d(kHalf);
  EXPECT_THROW(Partition::make(s, {s.parse_event({"(0,0)=0"}), EventExpr::whole()}), InvalidArgument);
  EXPECT_THROW(Partition::make(s, {s.parse_event({"(0,0)=0"}), s.parse_event({"(0,0)=1", "(1,0)=1"})}),
               InvalidArgument);
}

TEST(Partition, DropsNullAtoms) {
  const System s = System::bernoulli2d(kHalf);
  const Partition p = Partition::make(s, {EventExpr::whole(), EventExpr::empty()});
  EXPECT_EQ(p.size(), 1U);
  EXPECT_EQ(Partition::binary(s, EventExpr::whole()).size(), 1U);
}

TEST(Join, WithItselfIsItself) {
  const System s = System::bernoulli2d(kHalf);
  const Partition a = zero_coordinate(s);
  const Partition j = join(s, a, a);
  ASSERT_EQ(j.size(), 2U);
  EXPECT_NEAR(shannon_entropy(j), kLog2, 1e-15);
}

TEST(Join, IndependentTranslatesGiveQuarterAtoms) {
  const System s = System::bernoulli2d(kHalf);
  const Partition a = zero_coordinate(s);
  const Partition j = join(s, translate(s, a, {1, 2}), translate(s, a, {3, -1}));
  ASSERT_EQ(j.size(), 4U);
  for (const auto& atom : j.atoms()) {
    EXPECT_EQ(atom.measure, Scalar(q(1, 4)));
    EXPECT_EQ(Scalar(oracle::enumerate_measure(atom.event, kHalf)), atom.measure);
  }
}

TEST(Join, CounterexampleDiagonalStaysTwoAtoms) {
  const System s = System::counterexample(kHalf);
  const Partition a = right_zero(s);
  std::vector<Partition> translates;
  for (std::int64_t i = 1; i <= 10; ++i) translates.push_back(translate(s, a, {i, -i}));
  EXPECT_EQ(join(s, translates).size(), 2U);
}

TEST(Join, CapExceededThrows) {
  const System s = System::bernoulli2d(kHalf);
  const Partition a = zero_coordinate(s);
  std::vector<Partition> translates;
  for (std::int64_t i = 0; i < 5; ++i) translates.push_back(translate(s, a, {i, 0}));
  EXPECT_THROW(join(s, translates, JoinOptions{16}), CapExceeded);
  EXPECT_EQ(join(s, translates, JoinOptions{32}).size(), 32U);
}

TEST(ConditionalEntropy, Examples) {
  const System s = System::bernoulli2d({q(1, 3), q(2, 3)});
  const Partition a = zero_coordinate(s);
  EXPECT_NEAR(conditional_entropy(s, a, a), 0.0, 1e-15);
  EXPECT_NEAR(conditional_entropy(s, a, Partition::trivial()), kThirdTwoThirds, 1e-12);
  EXPECT_NEAR(conditional_entropy(s, a, translate(s, a, {4, 4})), kThirdTwoThirds, 1e-12);
}

TEST(ConditionalEntropy, MatchesDefinitionOnCorrelatedPair) {
  const System s = System::bernoulli2d({q(1, 4), q(3, 4)});
  // alpha = {[x00=0], rest}, eta = {[x00=0 or x10=0], rest}.
  const EventExpr a0 = s.parse_event({"(0,0)=0"});
  const EventExpr e0 = oracle::merge(a0, s.parse_event({"(0,0)=1", "(1,0)=0"}));
  const Partition alpha = Partition::binary(s, a0);
  const Partition eta = Partition::binary(s, e0);
  // mu(a0) = 1/4, mu(e0) = 1/4 + 3/16 = 7/16; a0 within e0.
  const double expected = (7.0 / 16) * direct_entropy({q(4, 7), q(3, 7)});
  EXPECT_NEAR(conditional_entropy(s, alpha, eta), expected, 1e-12);
}

TEST(SequenceEntropy, BernoulliIsConstantLog2) {
  const System s = System::bernoulli2d(kHalf);
  const StripSpec strip = strip2(q(1, 2), 2);
  std::vector<LatticePoint> pts;
  for (std::int64_t m = 0; m < 10; ++m) pts.push_back(strip_column(strip, m).front());
  const auto report = sequence_entropy_partial(s, zero_coordinate(s), SequencePlan(pts, strip), 10);
  ASSERT_EQ(report.rows().size(), 10U);
  for (const auto& row : report.rows()) EXPECT_NEAR(row.value, kLog2, 1e-12);
  for (double b : report.aux().at("value_bits")) EXPECT_NEAR(b, 1.0, 1e-12);
  EXPECT_TRUE(report.meta().at("no_limit_claimed").get<bool>());
}

TEST(SequenceEntropy, CounterexampleDiagonalDecaysAsOneOverK) {
  const System s = System::counterexample(kHalf);
  const StripSpec strip = strip2(-1, 1);
  std::vector<LatticePoint> pts;
  for (std::int64_t i = 0; i < 12; ++i) pts.push_back(LatticePoint{i, -i});
  const auto report = sequence_entropy_partial(s, right_zero(s), SequencePlan(pts, strip), 12);
  for (const auto& row : report.rows()) EXPECT_NEAR(row.value, kLog2 / static_cast<double>(row.index), 1e-12);
  // The trailing maximum over 8 rows lags the decay.
  EXPECT_NEAR(report.aux().at("trailing_max").back(), kLog2 / 5, 1e-12);
}

TEST(SequenceEntropy, TrivialPartitionIsZero) {
  const System s = System::bernoulli2d(kHalf);
  const StripSpec strip = strip2(0, 1);
  const SequencePlan plan({{0, 0}, {1, 0}, {2, 0}}, strip);
  const auto report = sequence_entropy_partial(s, Partition::trivial(), plan, 3);
  for (const auto& row : report.rows()) {
    EXPECT_EQ(row.value, 0.0);
  }
}

TEST(SequencePlan, RejectsOutsidePointsAndNonMonotonePlans) {
  const StripSpec strip = strip2(0, 1);
  EXPECT_THROW(SequencePlan({{0, 3}}, strip), InvalidArgument);
  EXPECT_THROW(SequencePlan({{1, 0}, {1, 0}}, strip), InvalidArgument);
  EXPECT_THROW(SequencePlan({{2, 0}, {1, 0}}, strip), InvalidArgument);
}

TEST(FullEntropySequence, BernoulliGreedyPlan) {
  const System s = System::bernoulli2d(kHalf);
  const StripSpec strip = strip2(q(1, 2), 2);
  const Partition a = zero_coordinate(s);
  const SequencePlan plan = construct_full_entropy_sequence(s, std::span(&a, 1), strip, 12);
  // Every point is admissible, so the greedy picks the lowest point of each column.
  ASSERT_EQ(plan.size(), 12U);
  for (std::int64_t m = 0; m < 12; ++m) {
    const std::int64_t lowest = (m % 2 == 0) ? m / 2 - 1 : (m + 1) / 2 - 1;
    EXPECT_EQ(plan.points()[m], (LatticePoint{m, lowest}));
  }
  const auto report = sequence_entropy_partial(s, a, plan, 12);
  EXPECT_NEAR(report.back().value, kLog2, 1e-12);
}

TEST(FullEntropySequence, CounterexampleDiagonalExhausts) {
  const System s = System::counterexample(kHalf);
  const Partition a = right_zero(s);
  FullSequenceOptions opts;
  opts.horizon = 1000;
  try {
    construct_full_entropy_sequence(s, std::span(&a, 1), strip2(-1, 1), 12, opts);
    FAIL() << "expected search exhaustion";
  } catch (const SearchExhausted& e) {
    EXPECT_NE(std::string(e.what()).find("j=2"), std::string::npos) << e.what();
  }
}

TEST(FullEntropySequence, TrivialPartitionSucceedsDegenerately) {
  const System s = System::bernoulli2d(kHalf);
  const Partition t = Partition::trivial();
  const SequencePlan plan = construct_full_entropy_sequence(s, std::span(&t, 1), strip2(0, 1), 5);
  ASSERT_EQ(plan.size(), 5U);
  for (std::size_t i = 1; i < plan.size(); ++i) EXPECT_GT(plan.points()[i][0], plan.points()[i - 1][0]);
}

TEST(EntropyProperty, PartialValuesNeverExceedEntropy) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const System s = System::bernoulli2d(oracle::random_weights(rng, 2));
    const int r = static_cast<int>(oracle::uniform(rng, 2, 3));
    const Partition alpha = Partition::make(s, oracle::random_labelled_partition(rng, s, r));
    const StripSpec strip = strip2(q(oracle::uniform(rng, -3, 3), oracle::uniform(rng, 1, 3)),
                                   q(oracle::uniform(rng, 2, 8), 2));
    std::vector<LatticePoint> pts;
    std::int64_t m = 0;
    for (int i = 0; i < 6; ++i) {
      m += oracle::uniform(rng, 0, 2);
      const auto col = strip_column(strip, m);
      pts.push_back(col[static_cast<std::size_t>(oracle::uniform(rng, 0, static_cast<std::int64_t>(col.size()) - 1))]);
      ++m;
    }
    const double h = shannon_entropy(alpha);
    const auto report = sequence_entropy_partial(s, alpha, SequencePlan(pts, strip), 6);
    for (const auto& row : report.rows()) {
      EXPECT_LE(row.value, h + 1e-12);
    }
  }
}

TEST(EntropyProperty, TranslationInvariance) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const bool is_cex = trial % 2 == 1;
    const auto w = oracle::random_weights(rng, 2);
    const System s = is_cex ? System::counterexample(w) : System::bernoulli2d(w);
    const Partition a = Partition::binary(s, oracle::random_event(rng, is_cex, 2));
    const LatticePoint v{oracle::uniform(rng, -20, 20), oracle::uniform(rng, -20, 20)};
    EXPECT_NEAR(shannon_entropy(translate(s, a, v)), shannon_entropy(a), 1e-13);
  }
}

TEST(EntropyProperty, JoinEntropyMatchesDirectFormula) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = oracle::random_weights(rng, 2);
    const System s = System::bernoulli2d(w);
    const Partition a = Partition::binary(s, oracle::random_event(rng, false, 2));
    const Partition b = Partition::binary(s, oracle::random_event(rng, false, 2));
    const Partition j = join(s, a, b);
    std::vector<Rational> masses;
    for (const auto& x : a.atoms()) {
      for (const auto& y : b.atoms()) masses.push_back(oracle::enumerate_measure(intersect(x.event, y.event), w));
    }
    EXPECT_NEAR(shannon_entropy(j), direct_entropy(masses), 1e-12);
  }
}

// Perturb a random partition by moving small cylinders between atoms and
// check H(a|e) + H(e|a) < -4d log(d/4) + 2d log r with d just above
// sum_j mu(A_j delta E_j).
TEST(EntropyProperty, ContinuityEnvelope) {
  std::mt19937_64 rng(34);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto w = oracle::random_weights(rng, 2);
    const System s = System::bernoulli2d(w);
    const int r = static_cast<int>(oracle::uniform(rng, 2, 4));
    std::vector<EventExpr> alpha_atoms = oracle::random_labelled_partition(rng, s, r);
    std::vector<EventExpr> eta_atoms = alpha_atoms;
    const int moves = static_cast<int>(oracle::uniform(rng, 1, 2));
    for (int mv = 0; mv < moves; ++mv) {
      const int from = static_cast<int>(oracle::uniform(rng, 0, r - 1));
      int to = static_cast<int>(oracle::uniform(rng, 0, r - 2));
      if (to >= from) ++to;
      if (eta_atoms[from].is_empty()) continue;
      const auto& src = eta_atoms[from].atoms();
      Cylinder::Map piece = src[static_cast<std::size_t>(oracle::uniform(rng, 0, static_cast<std::int64_t>(src.size()) - 1))].constraints();
      const auto depth = oracle::uniform(rng, 1, 6);
      for (std::int64_t i = 0; i < depth; ++i) {
        piece.emplace(CoordKey{5, i + 10 * mv}, static_cast<int>(oracle::uniform(rng, 0, 1)));
      }
      const EventExpr p{Cylinder(piece)};
      eta_atoms[from] = intersect(eta_atoms[from], s.complement(p));
      eta_atoms[to] = oracle::merge(eta_atoms[to], p);
    }
    Rational delta_sum = 0;
    for (int j = 0; j < r; ++j) {
      const Rational both = oracle::enumerate_measure(intersect(alpha_atoms[j], eta_atoms[j]), w);
      delta_sum += oracle::enumerate_measure(alpha_atoms[j], w) + oracle::enumerate_measure(eta_atoms[j], w) - 2 * both;
    }
    if (delta_sum == 0) continue;
    const Partition alpha = Partition::make(s, alpha_atoms);
    const Partition eta = Partition::make(s, eta_atoms);
    const double d = delta_sum.get_d() * (1 + 1e-9);
    const double envelope = -4 * d * std::log(d / 4) + 2 * d * std::log(static_cast<double>(r));
    const double lhs = conditional_entropy(s, alpha, eta) + conditional_entropy(s, eta, alpha);
    EXPECT_LT(lhs, envelope) << "delta=" << d << " r=" << r;
    ++checked;
  }
  EXPECT_GT(checked, 400);
}

TEST(EntropyProperty, GreedyPlansMeetTheirGuarantee) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = oracle::random_weights(rng, 2);
    const System s = System::bernoulli2d(w);
    std::vector<Partition> alphas;
    const auto count = oracle::uniform(rng, 1, 2);
    for (std::int64_t i = 0; i < count; ++i) {
      alphas.push_back(Partition::make(s, oracle::random_labelled_partition(rng, s, static_cast<int>(oracle::uniform(rng, 2, 3)))));
    }
    const StripSpec strip = strip2(q(oracle::uniform(rng, -2, 2), oracle::uniform(rng, 1, 3)), 2);
    const std::int64_t len = 7;
    const SequencePlan plan = construct_full_entropy_sequence(s, alphas, strip, len);
    for (const auto& alpha : alphas) {
      const double h = shannon_entropy(alpha);
      const auto rows = sequence_entropy_partial(s, alpha, plan, len).rows();
      double slack = 0;
      for (const auto& row : rows) {
        if (row.index >= 2) slack += std::ldexp(1.0, -static_cast<int>(row.index));
        EXPECT_GE(row.value, h - slack / static_cast<double>(row.index) - 1e-12) << "k=" << row.index;
      }
    }
  }
}
