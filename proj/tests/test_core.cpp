#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hit/core/filter.hpp"
#include "hit/core/hierarchy.hpp"
#include "hit/core/trajectory.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace hit;
using namespace hit::core;

namespace {

const IntentionSpace kTask = IntentionSpace::task();
const IntentionSpace kLow = IntentionSpace::low_level();
const IntentionSpace kPair{1, {Label::Part1, Label::Part2}};

void expect_probs(const Posterior& p, std::vector<double> want, double tol = 1e-12) {
  ASSERT_EQ(p.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(p[i], want[i], tol) << "entry " << i;
}

}  // namespace

TEST(IntentionSpace, RejectsBadLabelSets) {
  EXPECT_THROW(IntentionSpace(1, {Label::Part1}), InvalidParameter);
  EXPECT_THROW(IntentionSpace(1, {Label::Part1, Label::Part1}), InvalidParameter);
  EXPECT_THROW(IntentionSpace(1, {Label::Part1, Label::CE}), InvalidParameter);
  EXPECT_THROW(IntentionSpace(2, {Label::CE, Label::Part2}), InvalidParameter);
  EXPECT_THROW(IntentionSpace(3, {Label::CE, Label::CO}), InvalidParameter);
  EXPECT_EQ(IntentionSpace::high_level().size(), 2u);
  EXPECT_TRUE(kLow.contains(Label::FR));
  EXPECT_FALSE(kTask.contains(Label::FR));
}

TEST(TransitionMatrix, FiveStates) {
  const auto T = transition_matrix(5, 0.9);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) EXPECT_DOUBLE_EQ(T(i, j), i == j ? 0.9 : 0.025);
}

TEST(TransitionMatrix, IdentityAtAlphaOne) {
  const auto d = transition_matrix(2, 1.0).dense();
  EXPECT_EQ(d, (std::vector<std::vector<double>>{{1, 0}, {0, 1}}));
}

TEST(TransitionMatrix, UniformAtOneOverM) {
  const auto T = transition_matrix(3, 1.0 / 3.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(T(i, j), 1.0 / 3.0, 1e-15);
}

TEST(TransitionMatrix, Errors) {
  EXPECT_THROW(transition_matrix(1, 0.5), InvalidParameter);
  EXPECT_THROW(transition_matrix(5, -0.1), InvalidParameter);
  EXPECT_THROW(transition_matrix(5, 1.1), InvalidParameter);
  EXPECT_THROW(transition_matrix(5, std::nan("")), InvalidParameter);
}

TEST(Predict, UniformStaysUniform) {
  for (double a : {0.0, 0.2, 0.96, 1.0}) expect_probs(predict(Posterior::uniform(kTask), transition_matrix(5, a)), std::vector<double>(5, 0.2));
}

TEST(Predict, PointMassWithIdentity) {
  expect_probs(predict(Posterior::point_mass(kTask, 3), transition_matrix(5, 1.0)), {0, 0, 0, 1, 0});
}

TEST(Predict, OneRowOfTheMatrix) {
  expect_probs(predict(Posterior::point_mass(kTask, 0), transition_matrix(5, 0.9)), {0.9, 0.025, 0.025, 0.025, 0.025});
}

TEST(Predict, DimensionMismatch) {
  EXPECT_THROW(predict(Posterior::uniform(kTask), transition_matrix(4, 0.9)), DimensionMismatch);
}

TEST(Predict, AdvancesStep) {
  EXPECT_EQ(predict(Posterior::uniform(kTask), transition_matrix(5, 0.9)).step(), 1);
}

TEST(Update, ConstantLikelihoodIsUninformative) {
  const std::vector<double> lik{0.2, 0.2};
  expect_probs(update(Posterior::uniform(kPair), lik), {0.5, 0.5});
}

TEST(Update, HandArithmetic) {
  const std::vector<double> lik{0.3, 0.1};
  expect_probs(update(Posterior::uniform(kPair), lik), {0.75, 0.25});
}

TEST(Update, AllZeroIsDegenerate) {
  const std::vector<double> lik{0.0, 0.0};
  EXPECT_THROW(update(Posterior::uniform(kPair), lik), DegenerateEvidence);
}

TEST(Update, ZeroOnlyWhereThePriorIsZero) {
  const std::vector<double> lik{0.0, 1.0};
  EXPECT_THROW(update(Posterior::point_mass(kPair, 0), lik), DegenerateEvidence);
}

TEST(Update, RejectsBadLikelihoods) {
  EXPECT_THROW(update(Posterior::uniform(kPair), std::vector<double>{1.0}), DimensionMismatch);
  EXPECT_THROW(update(Posterior::uniform(kPair), std::vector<double>{-1.0, 1.0}), NumericError);
  EXPECT_THROW(update(Posterior::uniform(kPair), std::vector<double>{INFINITY, 1.0}), NumericError);
}

TEST(MapIntention, Argmax) {
  const IntentionSpace s{1, {Label::Part1, Label::Part2, Label::Part3}};
  EXPECT_EQ(map_intention(Posterior(s, {0.1, 0.7, 0.2})), Label::Part2);
}

TEST(MapIntention, TieGoesToLowestIndex) {
  EXPECT_EQ(map_intention(Posterior(kPair, {0.5, 0.5})), Label::Part1);
  EXPECT_EQ(map_index(std::vector<double>{0.2, 0.4, 0.4}), 1u);
}

TEST(MapIntention, NonFiniteIsAnError) {
  EXPECT_THROW(map_index(std::vector<double>{0.3, std::nan("")}), NumericError);
  EXPECT_THROW(Posterior(kPair, {0.3, std::nan("")}), NumericError);
  EXPECT_THROW(map_index(std::vector<double>{}), DimensionMismatch);
}

TEST(Posterior, RejectsUnnormalized) {
  EXPECT_THROW(Posterior(kPair, {0.5, 0.6}), InvalidParameter);
  EXPECT_THROW(Posterior(kPair, {1.0}), DimensionMismatch);
  EXPECT_THROW(Posterior::from_weights(kPair, std::vector<double>{0.0, 0.0}), DegenerateEvidence);
}

TEST(TrajectoryLikelihood, SingleStep) {
  EXPECT_DOUBLE_EQ(trajectory_likelihood(4, 1, [](int) { return 0.37; }), 0.37);
}

TEST(TrajectoryLikelihood, Product) {
  EXPECT_NEAR(trajectory_likelihood(3, 3, [](int) { return 0.5; }), 0.125, 1e-15);
}

TEST(TrajectoryLikelihood, ZeroDensity) {
  EXPECT_EQ(trajectory_likelihood(3, 3, [](int tau) { return tau == 2 ? 0.0 : 0.5; }), 0.0);
}

TEST(TrajectoryLikelihood, HorizonBeyondData) {
  EXPECT_THROW(trajectory_likelihood(2, 3, [](int) { return 1.0; }), InvalidParameter);
  EXPECT_THROW(trajectory_likelihood(2, 0, [](int) { return 1.0; }), InvalidParameter);
}

TEST(TrajectoryLikelihood, RejectsNegativeDensity) {
  EXPECT_THROW(trajectory_likelihood(2, 2, [](int) { return -1.0; }), NumericError);
}

TEST(HierarchicalLikelihood, PointMassOnFrPicksFr) {
  const std::vector<double> lik{0.1, 0.2, 0.3, 0.4, 0.5, 7.25};
  const auto link = link_distribution(Posterior::uniform(kLow));
  EXPECT_EQ(hierarchical_likelihood(lik, link.row(Label::CO)), 7.25);
}

TEST(HierarchicalLikelihood, ConstantLikelihoods) {
  synth::Gen g(3);
  for (int i = 0; i < 20; ++i) {
    const auto row = g.simplex(6);
    EXPECT_NEAR(hierarchical_likelihood(std::vector<double>(6, 2.5), row), 2.5, 1e-12);
  }
}

TEST(HierarchicalLikelihood, CeRowDotProduct) {
  const std::vector<double> row{0.6, 0.4, 0.0, 0.0, 0.0};
  const std::vector<double> lik{2, 1, 1, 1, 1};
  EXPECT_NEAR(hierarchical_likelihood(lik, row), 1.6, 1e-15);
}

TEST(HierarchicalLikelihood, LogFormMatchesLinear) {
  synth::Gen g(11);
  for (int i = 0; i < 200; ++i) {
    const auto row = g.simplex(6);
    std::vector<double> lik(6), ll(6);
    for (int k = 0; k < 6; ++k) {
      ll[k] = g.uniform(-40.0, 5.0);
      lik[k] = std::exp(ll[k]);
    }
    EXPECT_NEAR(hierarchical_log_likelihood(ll, row), std::log(hierarchical_likelihood(lik, row)), 1e-9);
  }
}

TEST(HierarchicalLikelihood, LogFormSurvivesUnderflow) {
  const std::vector<double> ll{-2000.0, -2001.0};
  const std::vector<double> row{0.5, 0.5};
  EXPECT_NEAR(hierarchical_log_likelihood(ll, row), -2000.0 + std::log(0.5 * (1 + std::exp(-1.0))), 1e-9);
  EXPECT_EQ(hierarchical_log_likelihood(std::vector<double>{-INFINITY, 0.0}, std::vector<double>{1.0, 0.0}), -INFINITY);
}

TEST(HierarchicalLikelihood, DimensionMismatch) {
  EXPECT_THROW(hierarchical_likelihood(std::vector<double>{1, 2}, std::vector<double>{1}), DimensionMismatch);
}

TEST(LinkDistribution, CeRowRenormalizes) {
  const auto link = link_distribution(Posterior(kLow, {0.2, 0.2, 0.2, 0.2, 0.0, 0.2}));
  const std::vector<double> want{0.25, 0.25, 0.25, 0.25, 0.0, 0.0};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(link.ce_row[i], want[i], 1e-15);
  EXPECT_FALSE(link.ce_fallback);
}

TEST(LinkDistribution, CoRowIsPointMassOnFr) {
  synth::Gen g(5);
  for (int i = 0; i < 50; ++i) {
    const auto link = link_distribution(Posterior(kLow, g.simplex(6)));
    EXPECT_EQ(link.co_row, (std::vector<double>{0, 0, 0, 0, 0, 1}));
    EXPECT_EQ(link.ce_row[5], 0.0);
  }
}

TEST(LinkDistribution, AllMassOnFrFallsBackToUniform) {
  const auto link = link_distribution(Posterior::point_mass(kLow, 5));
  EXPECT_TRUE(link.ce_fallback);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(link.ce_row[i], 0.2, 1e-15);
  EXPECT_EQ(link.ce_row[5], 0.0);
}

TEST(LinkDistribution, NeedsFr) {
  EXPECT_THROW(link_distribution(Posterior::uniform(kTask)), InvalidParameter);
  EXPECT_THROW(link_distribution(Posterior::uniform(IntentionSpace::high_level())), InvalidParameter);
}

// Properties

TEST(CoreProperty, RowStochasticSweep) {
  synth::Gen g(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const int m = g.integer(2, 9);
    const double a = g.coin(0.1) ? (g.coin() ? 0.0 : 1.0) : g.uniform(0.0, 1.0);
    const auto T = transition_matrix(m, a);
    for (int i = 0; i < m; ++i) {
      double row = 0.0;
      for (int j = 0; j < m; ++j) {
        row += T(i, j);
        EXPECT_EQ(T(i, j), T(j, i));
      }
      EXPECT_NEAR(row, 1.0, 1e-12) << "m=" << m << " alpha=" << a;
      EXPECT_EQ(T(i, i), a);
    }
  }
}

TEST(CoreProperty, NormalizationUnderRepeatedFiltering) {
  synth::Gen g(2);
  auto p = Posterior::uniform(kTask);
  for (int k = 0; k < 10000; ++k) {
    const auto T = transition_matrix(5, g.uniform(0.2, 1.0));
    p = update(predict(p, T), g.likelihoods(5));
    double s = 0.0;
    for (double x : p.probs()) {
      ASSERT_GE(x, 0.0);
      s += x;
    }
    ASSERT_NEAR(s, 1.0, 1e-9) << "step " << k;
  }
}

TEST(CoreProperty, UniformFixedPoint) {
  synth::Gen g(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = g.integer(2, 6);
    std::vector<Label> labels;
    for (int i = 0; i < m; ++i) labels.push_back(static_cast<Label>(i));
    const IntentionSpace s(1, labels);
    const auto out = predict(Posterior::uniform(s), transition_matrix(m, g.uniform(0.0, 1.0)));
    for (double x : out.probs()) EXPECT_NEAR(x, 1.0 / m, 1e-12);
  }
}

TEST(CoreProperty, AlphaMonotonicity) {
  double last = -1.0;
  for (double a = 0.0; a <= 1.0 + 1e-12; a += 0.05) {
    const double aa = std::min(a, 1.0);
    const auto out = predict(Posterior::point_mass(kTask, 2), transition_matrix(5, aa));
    EXPECT_NEAR(out[2], aa, 1e-15);
    EXPECT_GT(out[2], last);
    last = out[2];
  }
}

TEST(CoreProperty, MatchesForwardAlgorithm) {
  synth::Gen g(4);
  std::vector<std::vector<double>> ll;
  for (int k = 0; k < 300; ++k) {
    std::vector<double> v(5);
    for (auto& x : v) x = g.uniform(-25.0, 2.0);
    ll.push_back(v);
  }
  const auto want = oracle::forward_filter(std::vector<double>(5, 0.2), ll, 0.9);
  auto p = Posterior::uniform(kTask);
  const auto T = transition_matrix(5, 0.9);
  for (std::size_t k = 0; k < ll.size(); ++k) {
    p = update(predict(p, T), prediction::scaled_likelihoods(ll[k]));
    for (int j = 0; j < 5; ++j) ASSERT_NEAR(p[j], want[k][j], 1e-9) << "step " << k;
  }
}

TEST(CoreProperty, HierarchicalLikelihoodLinearAndBounded) {
  synth::Gen g(6);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> lik(6);
    for (auto& x : lik) x = g.uniform(0.0, 10.0);
    const auto a = g.simplex(6), b = g.simplex(6);
    const double w = g.uniform(0.0, 1.0);
    std::vector<double> mix(6);
    for (int i = 0; i < 6; ++i) mix[i] = w * a[i] + (1 - w) * b[i];
    const double h = hierarchical_likelihood(lik, mix);
    EXPECT_NEAR(h, w * hierarchical_likelihood(lik, a) + (1 - w) * hierarchical_likelihood(lik, b), 1e-12);
    EXPECT_GE(h, *std::min_element(lik.begin(), lik.end()) - 1e-12);
    EXPECT_LE(h, *std::max_element(lik.begin(), lik.end()) + 1e-12);
  }
}

TEST(CoreProperty, MapInvariantUnderRescaling) {
  synth::Gen g(7);
  for (int trial = 0; trial < 500; ++trial) {
    auto w = g.simplex(5);
    const auto before = map_index(w);
    const double c = std::exp(g.uniform(-20.0, 20.0));
    for (auto& x : w) x *= c;
    EXPECT_EQ(map_index(w), before);
  }
}
