#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hit/prediction/high_level.hpp"
#include "hit/prediction/mif.hpp"
#include "hit/prediction/tracker.hpp"
#include "hit/sim/workspace.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace hit;
using namespace hit::prediction;
using core::IntentionSpace;
using core::Label;
using core::Posterior;

namespace {

constexpr double kDt = 1.0 / 30.0;

GilmParams no_backprop(double sigma = 0.008) {
  GilmParams p;
  p.goal_backprop = false;
  p.process_noise_cov = Mat2::Identity() * sigma * sigma;
  return p;
}

ObservationWindow line_window(Vec2 start, Vec2 step, int n, Vec2 ee = Vec2(0.0, 0.64)) {
  ObservationWindow w(64);
  for (int i = 0; i < n; ++i) w.push(i * kDt, start + i * step, ee);
  return w;
}

const std::vector<GoalRegion> kGoals = sim::Workspace::standard().goal_regions();

}  // namespace

TEST(EstimateSpeed, EvenSpacing) {
  const auto w = line_window(Vec2::Zero(), Vec2(0.01, 0.0), 20);
  EXPECT_NEAR(estimate_speed(w, GilmParams{}), 0.3, 1e-12);
}

TEST(EstimateSpeed, Stationary) {
  EXPECT_EQ(estimate_speed(line_window(Vec2(0.2, 0.1), Vec2::Zero(), 20), GilmParams{}), 0.0);
}

TEST(EstimateSpeed, SingleSample) {
  EXPECT_THROW(estimate_speed(line_window(Vec2::Zero(), Vec2::Zero(), 1), GilmParams{}), InvalidParameter);
}

TEST(EstimateSpeed, UsesOnlyTheWindow) {
  ObservationWindow w(64);
  for (int i = 0; i < 10; ++i) w.push(i * kDt, Vec2(0.1 * i, 0.0), Vec2::Zero());  // fast, then still
  for (int i = 10; i < 40; ++i) w.push(i * kDt, Vec2(0.9, 0.0), Vec2::Zero());
  EXPECT_EQ(estimate_speed(w, GilmParams{}), 0.0);
}

TEST(ObservationWindow, StrictlyIncreasingTime) {
  ObservationWindow w;
  w.push(0.0, Vec2::Zero(), Vec2::Zero());
  EXPECT_THROW(w.push(0.0, Vec2::Zero(), Vec2::Zero()), InvalidParameter);
}

TEST(GilmStep, UnitStepAlongDirection) {
  const GoalRegion g{Vec2(3, 4), Mat2::Zero()};
  const Vec2 x = gilm_step(Vec2::Zero(), g, 1.0, 1.0, Vec2::Zero());
  EXPECT_NEAR(x.x(), 0.6, 1e-15);
  EXPECT_NEAR(x.y(), 0.8, 1e-15);
}

TEST(GilmStep, AtTheGoalNothingMoves) {
  const GoalRegion g{Vec2(0.3, 0.2), Mat2::Zero()};
  EXPECT_EQ(gilm_step(g.mean, g, 0.5, kDt, Vec2::Zero()), g.mean);
}

TEST(GilmStep, ZeroSpeed) {
  const GoalRegion g{Vec2(0.3, 0.2), Mat2::Zero()};
  EXPECT_EQ(gilm_step(Vec2(1, 1), g, 0.0, kDt, Vec2::Zero()), Vec2(1, 1));
  EXPECT_THROW(gilm_step(Vec2(1, 1), g, -1.0, kDt, Vec2::Zero()), InvalidParameter);
}

TEST(GilmStep, DistanceStrictlyDecreases) {
  synth::Gen gen(21);
  for (int i = 0; i < 1000; ++i) {
    const GoalRegion g{gen.point(), Mat2::Zero()};
    const Vec2 x = gen.point();
    const double d = (g.mean - x).norm();
    const double step = gen.uniform(0.0, 0.999) * d;
    if (step <= 0.0) continue;
    EXPECT_LT((g.mean - gilm_step(x, g, step, 1.0, Vec2::Zero())).norm(), d);
  }
}

TEST(GilmRollout, OneStepCovariance) {
  const auto r = gilm_rollout(Vec2::Zero(), {Vec2(1, 0), Mat2::Zero()}, 0.3, kDt, 1, no_backprop(0.01));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].cov.isApprox(Mat2::Identity() * 1e-4, 1e-14));
}

TEST(GilmRollout, AdditiveAccumulation) {
  const auto r = gilm_rollout(Vec2::Zero(), kGoals[1], 0.3, kDt, 3, no_backprop(0.01));
  EXPECT_TRUE(r[2].cov.isApprox(Mat2::Identity() * 3e-4, 1e-14));
  for (int k = 1; k < 3; ++k) EXPECT_GT(r[k].cov.trace(), r[k - 1].cov.trace());
}

TEST(GilmRollout, MeanMatchesMonteCarlo) {
  const Vec2 x0(0.0, 0.0);
  const Vec2 goal(0.6, 0.8);
  const double speed = 0.3;
  const int tp = 6;
  const auto r = gilm_rollout(x0, {goal, Mat2::Zero()}, speed, kDt, tp, no_backprop());
  const auto mc = oracle::mc_rollout(x0, goal, Mat2::Zero(), speed * kDt, 0.008, tp, 100000, 99);
  for (int k = 0; k < tp; ++k)
    for (int c = 0; c < 2; ++c)
      EXPECT_LE(std::abs(r[k].mean[c] - mc.mean[k][c]), 3.0 * mc.stderr_[k][c]) << "step " << k << " axis " << c;
}

TEST(GilmRollout, CovarianceMatchesMonteCarlo) {
  const auto r = gilm_rollout(Vec2::Zero(), {Vec2(0.6, 0.8), Mat2::Zero()}, 0.3, kDt, 5, no_backprop());
  const auto mc = oracle::mc_rollout(Vec2::Zero(), Vec2(0.6, 0.8), Mat2::Zero(), 0.01, 0.008, 5, 100000, 7);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(mc.cov[k].trace() / r[k].cov.trace(), 1.0, 0.03);
}

TEST(GilmLikelihood, OneStepIsOneGaussian) {
  ObservationWindow w(8);
  w.push(0.0, Vec2(0.1, 0.1), Vec2::Zero());
  w.push(kDt, Vec2(0.11, 0.1), Vec2::Zero());
  const GoalRegion g{Vec2(0.5, 0.1), Mat2::Zero()};
  const auto p = no_backprop(0.01);
  // speed from two samples: 0.01 m per step
  const Vec2 mean(0.11, 0.1);
  EXPECT_NEAR(gilm_likelihood(w, g, 1, p) / oracle::bivariate_normal_pdf(Vec2(0.11, 0.1), mean, p.process_noise_cov), 1.0,
              1e-12);
}

TEST(GilmLikelihood, AgreesWithMonteCarloDensity) {
  // Five context samples, then three observed steps near the goal-directed path.
  ObservationWindow w(16);
  const Vec2 goal = kGoals[2].mean;
  Vec2 x(0.0, 0.04);
  const Vec2 dir = (goal - x).normalized();
  double t = 0.0;
  for (int i = 0; i < 6; ++i) w.push(t += kDt, x += 0.009 * dir, Vec2::Zero());
  const Vec2 perp(-dir.y(), dir.x());
  w.push(t += kDt, x + 0.009 * dir + 0.004 * perp, Vec2::Zero());
  w.push(t += kDt, x + 0.018 * dir - 0.003 * perp, Vec2::Zero());
  w.push(t += kDt, x + 0.027 * dir + 0.006 * perp, Vec2::Zero());
  const GilmParams params{};
  const int tp = 3;
  const double lik = gilm_likelihood(w, kGoals[2], tp, params);

  const double speed = estimate_speed(w, params);
  const auto anchor = w.size() - tp - 1;
  const auto mc = oracle::mc_rollout(w[anchor].wrist, goal, kGoals[2].cov, speed * kDt, 0.008, tp, 1000000, 5);
  double want = 1.0;
  for (int k = 0; k < tp; ++k) want *= oracle::bivariate_normal_pdf(w[anchor + 1 + k].wrist, mc.mean[k], mc.cov[k]);
  EXPECT_NEAR(lik / want, 1.0, 0.10);
}

TEST(GilmLikelihood, ObservationsOnTheMeansFavorTheTrueGoal) {
  for (int g = 0; g < 5; ++g) {
    ObservationWindow w(32);
    const Vec2 start(0.0, 0.2);
    const auto roll = gilm_rollout(start, kGoals[g], 0.3, kDt, 15, GilmParams{});
    w.push(0.0, start, Vec2::Zero());
    for (int k = 0; k < 15; ++k) w.push((k + 1) * kDt, roll[k].mean, Vec2::Zero());
    const auto ll = goal_log_likelihoods(w, kGoals, 5, GilmParams{});
    EXPECT_EQ(core::map_index(scaled_likelihoods(ll)), static_cast<std::size_t>(g)) << "goal " << g;
  }
}

TEST(GilmLikelihood, HeadingToGoalThree) {
  const auto walk = synth::walk({{2, 2}}, 17);
  const auto& ll = walk.log_lik.back();
  for (int j = 0; j < 5; ++j)
    if (j != 2) EXPECT_GT(ll[2], ll[j]);
}

TEST(GilmLikelihood, NeedsTpPlusOneSamples) {
  EXPECT_THROW(gilm_log_likelihood(line_window(Vec2::Zero(), Vec2(0.01, 0), 5), kGoals[0], 5, GilmParams{}),
               InvalidParameter);
}

TEST(GilmLikelihood, SingularCovarianceIsRegularized) {
  GilmParams p;
  p.process_noise_cov = Mat2::Zero();
  p.goal_backprop = false;
  const auto w = line_window(Vec2::Zero(), Vec2(0.01, 0), 8);
  const double ll = gilm_log_likelihood(w, {Vec2(1, 0), Mat2::Zero()}, 3, p);
  EXPECT_TRUE(std::isfinite(ll));
}

TEST(GilmLikelihood, TranslationAndRotationInvariance) {
  synth::Gen gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    const GoalRegion g{gen.point(0.0, 0.5), Mat2::Identity() * 6.25e-4};
    std::vector<Vec2> pts;
    Vec2 x = gen.point(0.0, 0.5);
    for (int i = 0; i < 12; ++i) pts.push_back(x += Vec2(gen.normal(0.01), gen.normal(0.01)));
    const Vec2 shift = gen.point(-2.0, 2.0);
    const double th = gen.uniform(0.0, 2 * std::numbers::pi);
    const Mat2 R = Eigen::Rotation2Dd(th).toRotationMatrix();
    ObservationWindow a(32), b(32), c(32);
    for (int i = 0; i < 12; ++i) {
      a.push(i * kDt, pts[i], Vec2::Zero());
      b.push(i * kDt, pts[i] + shift, Vec2::Zero());
      c.push(i * kDt, R * pts[i], Vec2::Zero());
    }
    const double la = gilm_log_likelihood(a, g, 5, GilmParams{});
    const double lb = gilm_log_likelihood(b, {g.mean + shift, g.cov}, 5, GilmParams{});
    const double lc = gilm_log_likelihood(c, {R * g.mean, g.cov}, 5, GilmParams{});
    EXPECT_NEAR(la, lb, 1e-8 * (1 + std::abs(la)));
    EXPECT_NEAR(la, lc, 1e-8 * (1 + std::abs(la)));
  }
}

TEST(MifPosterior, AllOnOne) {
  ParticleSet ps(IntentionSpace::task(), 100, 1);
  for (auto& p : ps.particles()) p.intention = 0;
  const auto post = mif_posterior(ps);
  EXPECT_EQ(std::vector<double>(post.probs().begin(), post.probs().end()), (std::vector<double>{1, 0, 0, 0, 0}));
}

TEST(MifPosterior, SpreadIsUniform) {
  const auto post = mif_posterior(ParticleSet(IntentionSpace::task(), 1000, 1));
  for (double p : post.probs()) EXPECT_NEAR(p, 0.2, 1e-12);
}

TEST(MifPosterior, SixHundredFourHundred) {
  ParticleSet ps(IntentionSpace::task(), 1000, 1);
  int i = 0;
  for (auto& p : ps.particles()) p.intention = i++ < 600 ? 0 : 1;
  const auto post = mif_posterior(ps);
  EXPECT_NEAR(post[0], 0.6, 1e-12);
  EXPECT_NEAR(post[1], 0.4, 1e-12);
  EXPECT_EQ(post[2] + post[3] + post[4], 0.0);
}

TEST(MifStep, NoMutationConsistentEvidence) {
  ParticleSet ps(IntentionSpace::task(), 1000, 3);
  for (auto& p : ps.particles()) p.intention = 1;
  const auto walk = synth::walk({{1, 12}}, 5);
  for (const auto& ll : walk.log_lik) {
    auto step = mif_step(std::move(ps), scaled_likelihoods(ll), 1.0);
    ps = std::move(step.particles);
    EXPECT_EQ(step.posterior[1], 1.0);
  }
}

TEST(MifStep, StraightToGoalTwo) {
  const auto walk = synth::walk({{1, 6}}, 8);
  ParticleSet ps(IntentionSpace::task(), 1000, 8);
  std::vector<double> exact(5, 0.2);
  double p2 = 0.0;
  for (const auto& ll : walk.log_lik) {
    const auto lik = scaled_likelihoods(ll);
    auto step = mif_step(std::move(ps), lik, 0.96);
    ps = std::move(step.particles);
    exact = oracle::exact_step(exact, lik, 0.96);
    const std::vector<double> got(step.posterior.probs().begin(), step.posterior.probs().end());
    EXPECT_LT(oracle::total_variation(got, exact), 0.05);
    p2 = got[1];
  }
  EXPECT_GT(p2, 0.8);  // 6 strides = 30 observations
}

TEST(MifStep, SwitchFromTwoToFour) {
  const auto walk = synth::walk({{1, 18}, {3, 12}}, 9);  // switch at 3 s
  ParticleSet ps(IntentionSpace::task(), 1000, 9);
  std::vector<double> exact(5, 0.2);
  std::optional<int> switched;
  for (std::size_t k = 0; k < walk.log_lik.size(); ++k) {
    const auto lik = scaled_likelihoods(walk.log_lik[k]);
    auto step = mif_step(std::move(ps), lik, 0.96);
    ps = std::move(step.particles);
    exact = oracle::exact_step(exact, lik, 0.96);
    const std::vector<double> got(step.posterior.probs().begin(), step.posterior.probs().end());
    EXPECT_LT(oracle::total_variation(got, exact), 0.05) << "stride " << k;
    if (k >= 18 && !switched && core::map_index(got) == 3) switched = static_cast<int>(k - 17);
  }
  ASSERT_TRUE(switched);
  EXPECT_LE(*switched * 5 * kDt, 1.0);
}

TEST(MifStep, ZeroWeightResets) {
  ParticleSet ps(IntentionSpace::task(), 50, 1);
  for (auto& p : ps.particles()) p.intention = 0;
  const std::vector<double> lik{0, 1, 1, 1, 1};
  const auto step = mif_step(std::move(ps), lik, 1.0);
  EXPECT_TRUE(step.reset);
  for (double p : step.posterior.probs()) EXPECT_NEAR(p, 0.2, 1e-12);
}

TEST(MifStep, ResamplesBelowHalfEss) {
  ParticleSet ps(IntentionSpace::task(), 1000, 2);
  const std::vector<double> lik{1, 1e-6, 1e-6, 1e-6, 1e-6};
  const auto step = mif_step(std::move(ps), lik, 1.0);
  EXPECT_TRUE(step.resampled);
  EXPECT_NEAR(step.particles.effective_sample_size(), 1000.0, 1e-6);
  EXPECT_NEAR(step.posterior[0], 1.0, 0.01);
}

TEST(MifStep, DimensionMismatch) {
  EXPECT_THROW(mif_step(ParticleSet(IntentionSpace::task(), 10, 1), std::vector<double>{1, 1}, 0.9), DimensionMismatch);
}

TEST(MifProperty, SameSeedSameParticles) {
  const auto walk = synth::walk({{0, 8}, {4, 8}}, 12);
  ParticleSet a(IntentionSpace::task(), 500, 77), b(IntentionSpace::task(), 500, 77);
  for (const auto& ll : walk.log_lik) {
    const auto lik = scaled_likelihoods(ll);
    a = mif_step(std::move(a), lik, 0.9).particles;
    b = mif_step(std::move(b), lik, 0.9).particles;
    ASSERT_TRUE(a == b);
  }
}

TEST(MifProperty, NormalizedAfterEveryStep) {
  synth::Gen gen(13);
  ParticleSet ps(IntentionSpace::task(), 300, 13);
  for (int k = 0; k < 500; ++k) {
    ps = mif_step(std::move(ps), gen.likelihoods(5), gen.uniform(0.5, 1.0)).particles;
    double s = 0.0;
    for (const auto& p : ps.particles()) s += p.weight;
    ASSERT_EQ(ps.size(), 300u);
    ASSERT_NEAR(s, 1.0, 1e-9);
  }
}

TEST(MifProperty, ErrorShrinksWithParticleCount) {
  std::vector<double> med;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    std::vector<double> tv;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto walk = synth::walk({{1, 9}, {3, 9}}, 1000 + seed);
      ParticleSet ps(IntentionSpace::task(), n, seed);
      std::vector<double> exact(5, 0.2);
      double worst = 0.0;
      for (const auto& ll : walk.log_lik) {
        const auto lik = scaled_likelihoods(ll);
        auto step = mif_step(std::move(ps), lik, 0.96);
        ps = std::move(step.particles);
        exact = oracle::exact_step(exact, lik, 0.96);
        worst = std::max(worst, oracle::total_variation({step.posterior.probs().begin(), step.posterior.probs().end()}, exact));
      }
      tv.push_back(worst);
    }
    med.push_back(oracle::median(tv));
  }
  EXPECT_GT(med[0], med[1]);
  EXPECT_GT(med[1], med[2]);
  EXPECT_LT(med[2], 0.05);
}

TEST(FrGoalRegion, FollowsTheRobot) {
  const auto a = fr_goal_region(Vec2(0.4, 0.2), Mat2::Identity() * 9e-4);
  EXPECT_EQ(a.mean, Vec2(0.4, 0.2));
  EXPECT_EQ(a.kind, RegionKind::FollowRobot);
  const auto b = fr_goal_region(Vec2(0.1, 0.5), Mat2::Identity() * 9e-4);
  EXPECT_TRUE((b.mean - a.mean).isApprox(Vec2(-0.3, 0.3), 1e-14));
}

TEST(FrGoalRegion, DefaultStd) {
  const HighLevelConfig c;
  EXPECT_NEAR(std::sqrt(c.fr_cov(0, 0)), 0.03, 1e-15);
  EXPECT_NEAR(std::sqrt(c.fr_cov(1, 1)), 0.03, 1e-15);
  EXPECT_EQ(c.fr_cov(0, 1), 0.0);
  EXPECT_THROW(fr_goal_region(Vec2::Zero(), Mat2::Identity() * -1.0), NumericError);
}

namespace {

// Exact two-state filter on likelihoods assembled from per-goal GILM terms
// and the link arithmetic done by hand.
struct HighOracle {
  std::vector<double> p;
  double alpha;
  void step(const ObservationWindow& w, const std::vector<double>& low_task_pred, const HighLevelConfig& cfg) {
    const GilmParams params{};
    double task_mass = 0.0;
    for (double x : low_task_pred) task_mass += x;
    double ce = 0.0;
    for (int i = 0; i < 5; ++i)
      ce += low_task_pred[i] / task_mass * std::exp(gilm_log_likelihood(w, kGoals[i], cfg.tp, params));
    const double co = std::exp(gilm_log_likelihood(w, {w.back().robot_ee, cfg.fr_cov}, cfg.tp, params));
    p = oracle::exact_step(p, {ce, co}, alpha);
  }
};

}  // namespace

TEST(HighLevelStep, ApproachingTheRobot) {
  const HighLevelConfig cfg;
  const Vec2 ee(0.1, 0.55);
  const auto low_pred = with_fr_slot(Posterior::uniform(IntentionSpace::task()));
  auto prior = Posterior::point_mass(IntentionSpace::high_level(), 0);
  HighOracle ref{{1.0, 0.0}, cfg.alpha};
  ObservationWindow w(32);
  Vec2 x(0.0, 0.1);
  const Vec2 v = (ee - x).normalized() * 0.3 * kDt;
  int k = 0;
  for (; k < 7; ++k) w.push(k * kDt, x += v, ee);
  for (int s = 0; s < 5; ++s) {
    for (int i = 0; i < 6; ++i, ++k) w.push(k * kDt, x += v, ee);
    const auto step = high_level_step(prior, w, low_pred, kGoals, cfg, GilmParams{});
    prior = step.posterior;
    ref.step(w, std::vector<double>(5, 0.2), cfg);
    EXPECT_NEAR(prior[1], ref.p[1], 0.02);
    EXPECT_NEAR(prior[0] + prior[1], 1.0, 1e-9);
  }
  EXPECT_GT(prior[1], 0.9);
}

TEST(HighLevelStep, WorkingInRegionOne) {
  const HighLevelConfig cfg;
  const Vec2 ee(0.35, 0.64);
  std::vector<double> lp{0.9, 0.025, 0.025, 0.025, 0.025};
  const auto low_pred = with_fr_slot(Posterior(IntentionSpace::task(), lp));
  auto prior = Posterior::uniform(IntentionSpace::high_level());
  HighOracle ref{{0.5, 0.5}, cfg.alpha};
  synth::Gen gen(41);
  ObservationWindow w(32);
  const Vec2 c = kGoals[0].mean;
  int k = 0;
  for (; k < 7; ++k) w.push(k * kDt, c + Vec2(gen.normal(0.003), gen.normal(0.003)), ee);
  for (int s = 0; s < 5; ++s) {
    for (int i = 0; i < 6; ++i, ++k) w.push(k * kDt, c + Vec2(gen.normal(0.003), gen.normal(0.003)), ee);
    prior = high_level_step(prior, w, low_pred, kGoals, cfg, GilmParams{}).posterior;
    ref.step(w, lp, cfg);
    EXPECT_NEAR(prior[0], ref.p[0], 0.02);
  }
  EXPECT_GT(prior[0], 0.9);
}

TEST(HighLevelStep, IdentityTransitionOnlyUpdates) {
  HighLevelConfig cfg;
  cfg.alpha = 1.0;
  const auto prior = Posterior::point_mass(IntentionSpace::high_level(), 0);
  const auto w = line_window(Vec2(0, 0.1), Vec2(0, 0.01), 12);
  const auto step = high_level_step(prior, w, with_fr_slot(Posterior::uniform(IntentionSpace::task())), kGoals, cfg,
                                    GilmParams{});
  EXPECT_EQ(step.predicted[0], 1.0);
  EXPECT_EQ(step.posterior[0], 1.0);  // a point mass cannot move under update alone
}

TEST(HighLevelStep, NeedsOneGoalPerTaskLabel) {
  const auto w = line_window(Vec2(0, 0.1), Vec2(0, 0.01), 12);
  const std::vector<GoalRegion> four(kGoals.begin(), kGoals.begin() + 4);
  EXPECT_THROW(high_level_step(Posterior::uniform(IntentionSpace::high_level()), w,
                               with_fr_slot(Posterior::uniform(IntentionSpace::task())), four, HighLevelConfig{},
                               GilmParams{}),
               DimensionMismatch);
}

TEST(Tracker, StrideRates) {
  HierarchicalTracker tr(TrackerConfig{}, kGoals, 1);
  std::vector<int> low, high;
  const Vec2 ee(0.0, 0.64);
  for (int k = 1; k <= 300; ++k) {
    const auto r = tr.tick(k * kDt, Vec2(0.0, 0.04 + 0.001 * k), ee);
    if (r.low_updated) low.push_back(k);
    if (r.high_updated) high.push_back(k);
  }
  // first strides wait for tp + 1 samples, then every tp new samples
  EXPECT_EQ(low.front(), 6);
  EXPECT_EQ(high.front(), 7);
  for (std::size_t i = 1; i < low.size(); ++i) EXPECT_EQ(low[i] - low[i - 1], 5);
  for (std::size_t i = 1; i < high.size(); ++i) EXPECT_EQ(high[i] - high[i - 1], 6);
  EXPECT_EQ(low.size(), 59u);
  EXPECT_EQ(high.size(), 49u);
}

TEST(Tracker, HighUsesCurrentLowPrediction) {
  TrackerConfig cfg;
  HierarchicalTracker tr(cfg, kGoals, 4);
  const Vec2 ee(0.0, 0.64);
  for (int k = 1; k <= 90; ++k) tr.tick(k * kDt, kGoals[1].mean, ee);
  const auto want = core::predict(tr.low(), core::transition_matrix(5, cfg.low.alpha));
  const auto got = tr.low_predicted();
  for (int i = 0; i < 5; ++i) EXPECT_EQ(got[i], want[i]);
  EXPECT_EQ(got[5], 0.0);
}

TEST(Tracker, DefaultsKeepHighLevelStickier) {
  const TrackerConfig cfg;
  EXPECT_GT(cfg.high.alpha, cfg.low.alpha);
  EXPECT_LE(cfg.low.tp * cfg.low.dt, 0.2 + 1e-12);
  EXPECT_LE(cfg.high.tp * cfg.low.dt, 0.2 + 1e-12);
}
