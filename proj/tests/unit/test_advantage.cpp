#include <gtest/gtest.h>

#include <cmath>

#include "olab/advantage.hpp"
#include "olab/softmax_policy.hpp"
#include "olab/testing/gradient_check.hpp"
#include "test_util.hpp"

using namespace olab;

namespace {

// Rewards (1,0,2,1) through states (0,1,2,0) over a full H=4 horizon.
Trajectory worked_trajectory() {
  Trajectory t;
  t.steps = {{0, 0, 1.0}, {1, 0, 0.0}, {2, 0, 2.0}, {0, 0, 1.0}};
  return t;
}

Baseline worked_baseline() {
  const std::vector<double> v{1.0, 2.0, 3.0};
  return Baseline::stationary(4, v);
}

Trajectory random_trajectory(RngStream& rng, int H, int S, bool cut) {
  Trajectory t;
  const int len = cut ? 1 + rng.uniform_int(H - 1) : H;
  t.start_time = cut ? rng.uniform_int(H - len + 1) : 0;
  for (int j = 0; j < len; ++j) t.steps.push_back({rng.uniform_int(S), 0, rng.uniform()});
  if (cut && t.start_time + len < H) t.terminal_state = rng.uniform_int(S);
  return t;
}

Baseline random_baseline(RngStream& rng, int H, int S) {
  ValueTable v{H, S, std::vector<double>(static_cast<std::size_t>(H + 1) * S), 0.0};
  for (auto& x : v.values) x = rng.uniform() * H;
  return Baseline::from_values(v);
}

}  // namespace

TEST(FMax, Basics) {
  const std::vector<std::optional<double>> v{2.0, 7.0, 4.0};
  EXPECT_EQ(*f_max(v), 7.0);
  const std::vector<std::optional<double>> same{3.0, 3.0};
  EXPECT_EQ(*f_max(same), 3.0);
  const std::vector<std::optional<double>> none{std::nullopt, std::nullopt};
  EXPECT_FALSE(f_max(none));
  const std::vector<std::optional<double>> partial{std::nullopt, -1.0};
  EXPECT_EQ(*f_max(partial), -1.0);
}

TEST(FMax, EstimatedReplaysUpdateLog) {
  TabularEstimator est(2, 3, 4, 0.1);
  Trajectory a, b;
  a.steps = {{0, 0, 1.0}, {0, 0, 1.0}};
  b.steps = {{0, 0, 3.0}};
  est.update(1, a);
  est.update(2, b);
  est.update(2, a);
  const auto f = estimated_fmax(est, 4);
  EXPECT_DOUBLE_EQ(f(0, 0), 2.5);  // oracle 2: (3 + 2) / 2
  EXPECT_TRUE(f.defined(0));
  EXPECT_FALSE(f.defined(1));
  EXPECT_EQ(f(2, 1), 0.0);
  EXPECT_EQ(f(4, 0), 0.0);
}

TEST(FMax, TrueIsPointwiseMax) {
  const auto m = test::random_mdp(3, 2, 4, 1);
  const std::vector<ValueTable> v{exact_policy_value(m, test::random_policy(3, 2, 2)),
                                  exact_policy_value(m, test::random_policy(3, 2, 3))};
  const auto f = true_fmax(v);
  for (int t = 0; t <= 4; ++t) {
    for (int s = 0; s < 3; ++s) EXPECT_EQ(f(t, s), std::max(v[0].at(t, s), v[1].at(t, s)));
  }
}

TEST(GeneralizedQ, Cases) {
  const auto m = test::three_state_chain(3);
  const Baseline zero(3, 3);
  EXPECT_EQ(generalized_q(m, zero, 0, 0, 0), 0.5);
  EXPECT_EQ(advantage_f(m, zero, 1, 2, 1), 1.0);
  const auto f = Baseline::stationary(3, std::vector<double>{1.0, 2.0, 4.0});
  EXPECT_DOUBLE_EQ(generalized_q(m, f, 0, 1, 1), 4.0);
  EXPECT_DOUBLE_EQ(generalized_q(m, f, 2, 1, 1), 0.0);  // f_H = 0
  const auto slip = test::three_state_chain(3, 0.3);
  EXPECT_DOUBLE_EQ(generalized_q(slip, f, 0, 0, 1), 0.7 * 2.0 + 0.3 * 1.0);
  EXPECT_DOUBLE_EQ(advantage_f(slip, f, 0, 0, 1), 1.7 - 1.0);
}

TEST(GeneralizedQ, ExactValueHasZeroMeanAdvantage) {
  const auto m = test::random_mdp(4, 3, 5, 5);
  const auto pi = test::random_policy(4, 3, 6);
  const auto f = Baseline::from_values(exact_policy_value(m, pi));
  for (int t = 0; t < 5; ++t) {
    for (int s = 0; s < 4; ++s) {
      double e = 0.0;
      for (int a = 0; a < 3; ++a) e += pi.prob(t, s, a) * advantage_f(m, f, t, s, a);
      EXPECT_NEAR(e, 0.0, 1e-12);
    }
  }
}

TEST(IStep, WorkedCases) {
  const auto seg = worked_trajectory();
  const auto f = worked_baseline();
  EXPECT_DOUBLE_EQ(i_step_advantage(seg, Baseline(4, 3), 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(i_step_advantage(seg, f, 0, 2), 1 + 0 + 2 + 1.0 - 1.0);
  EXPECT_DOUBLE_EQ(i_step_advantage(seg, f, 1, 2), 0 + 2 + 1 - 2.0);
  EXPECT_DOUBLE_EQ(i_step_advantage(seg, f, 1, 10), 0 + 2 + 1 - 2.0);
  EXPECT_THROW(i_step_advantage(seg, f, 4, 0), std::out_of_range);
}

TEST(IStep, TruncatedSegmentNeedsCoverage) {
  Trajectory seg;
  seg.steps = {{0, 0, 1.0}, {1, 0, 0.0}};
  seg.terminal_state = 2;
  const auto f = worked_baseline();
  EXPECT_DOUBLE_EQ(i_step_advantage(seg, f, 0, 1), 1.0 + 3.0 - 1.0);
  EXPECT_THROW(i_step_advantage(seg, f, 0, 2), std::invalid_argument);
}

TEST(LambdaAdvantage, Endpoints) {
  const auto seg = worked_trajectory();
  const auto f = worked_baseline();
  EXPECT_DOUBLE_EQ(lambda_advantage(seg, f, 0.0), i_step_advantage(seg, f, 0, 0));
  EXPECT_DOUBLE_EQ(lambda_advantage(seg, f, 1.0), 4.0 - 1.0);
  EXPECT_NEAR(lambda_advantage(seg, f, 0.9), lambda_advantage_telescoped(seg, f, 0.9), 1e-12);
}

TEST(LambdaAdvantage, DualFormulaOnRandomSegments) {
  RngStream rng(31);
  for (double lambda : {0.0, 0.3, 0.9, 1.0}) {
    for (int i = 0; i < 100; ++i) {
      const auto f = random_baseline(rng, 8, 4);
      const auto seg = random_trajectory(rng, 8, 4, i % 2 == 1);
      const auto gae = gae_advantages(seg, f, lambda);
      for (int j = 0; j < static_cast<int>(seg.size()); ++j) {
        const double direct = lambda_advantage(seg, f, lambda, j);
        EXPECT_NEAR(direct, lambda_advantage_telescoped(seg, f, lambda, j), 1e-10);
        EXPECT_NEAR(direct, gae[j], 1e-10);
      }
    }
  }
}

TEST(LambdaAdvantageExact, ZeroLambdaIsOneStep) {
  const auto m = test::random_mdp(3, 2, 4, 8);
  const auto pi = test::random_policy(3, 2, 9);
  RngStream rng(10);
  const auto f = random_baseline(rng, 4, 3);
  const auto g = lambda_advantage_exact(m, f, pi, 0.0);
  for (int t = 0; t < 4; ++t) {
    for (int s = 0; s < 3; ++s) {
      for (int a = 0; a < 2; ++a) EXPECT_NEAR(g.at(t, s, a), advantage_f(m, f, t, s, a), 1e-12);
    }
  }
}

TEST(LambdaAdvantageExact, MatchesMonteCarlo) {
  const auto m = test::random_mdp(3, 2, 5, 11);
  const auto pi = test::random_policy(3, 2, 12);
  RngStream rng(13);
  const auto f = random_baseline(rng, 5, 3);
  const auto g = lambda_advantage_exact(m, f, pi, 0.7);
  // Condition on (t=1, s=2, a=0) by forcing the first action.
  const int n = 40000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    bool first = true;
    ActionSampler forced = [&](int s, int t, RngStream& r) {
      if (first) {
        first = false;
        return 0;
      }
      return pi.sample(t, s, r);
    };
    const auto seg = simulate_trajectory(m, forced, 2, 1, rng);
    const double x = lambda_advantage_telescoped(seg, f, 0.7);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
  EXPECT_NEAR(mean, g.at(1, 2, 0), 4 * se);
}

TEST(IlLoss, ZeroCases) {
  const auto m = test::random_mdp(3, 2, 4, 14);
  const auto pi = test::random_policy(3, 2, 15);
  const auto f = Baseline::from_values(exact_policy_value(m, pi));
  const auto d = state_distributions(m, test::random_policy(3, 2, 16));
  EXPECT_NEAR(il_loss(m, d, f, pi), 0.0, 1e-12);

  // One state, advantages (1, -1) under f = 0.5 with rewards (1, 0) scaled: use f = 0.5.
  const auto one = build_mdp(1, 2, 1, {1.0, 1.0}, {1.0, 0.0}, {1.0});
  const auto half = Baseline::stationary(1, std::vector<double>{0.5});
  const auto d1 = state_distributions(one, PolicyTable::uniform(1, 2));
  EXPECT_NEAR(il_loss(one, d1, half, PolicyTable::uniform(1, 2)), 0.0, 1e-15);
}

TEST(IlLoss, WorkedInstance) {
  // Three-state chain H=2 from state 0, f = 0. Policy: right w.p. 0.25.
  // t=0: d=(1,0,0): A(stay)=0.5, A(right)=0 -> 0.375.
  // t=1: d=(0.75,0.25,0): state 0 -> 0.375, state 1 -> 0 -> 0.28125.
  const auto m = test::three_state_chain(2);
  PolicyTable pi(3, 2);
  for (int s = 0; s < 3; ++s) {
    pi.probs(0, s)[0] = 0.75;
    pi.probs(0, s)[1] = 0.25;
  }
  const auto d = state_distributions(m, pi);
  EXPECT_NEAR(il_loss(m, d, Baseline(2, 3), pi), -(0.375 + 0.28125), 1e-15);
}

TEST(MixedLoss, Reductions) {
  const auto m = test::random_mdp(4, 3, 5, 17);
  const auto pi = test::random_policy(4, 3, 18);
  RngStream rng(19);
  const auto f = random_baseline(rng, 5, 4);
  const auto d = state_distributions(m, test::random_policy(4, 3, 20));
  EXPECT_NEAR(mixed_loss(m, d, f, pi, 0.0, 0.0), il_loss(m, d, f, pi), 1e-12);
  // Pure RL term with f = 0 and lambda = 1 is the negated return.
  EXPECT_NEAR(mixed_loss(m, d, Baseline(5, 4), pi, 1.0, 1.0), -exact_policy_value(m, pi).initial_value, 1e-12);
  // Linear in lambda_mix.
  const double a = mixed_loss(m, d, f, pi, 0.0, 0.6);
  const double b = mixed_loss(m, d, f, pi, 1.0, 0.6);
  EXPECT_NEAR(mixed_loss(m, d, f, pi, 0.5, 0.6), 0.5 * (a + b), 1e-12);
  EXPECT_THROW(mixed_loss(m, d, f, pi, 1.5, 0.6), std::invalid_argument);
}

TEST(MixedLoss, WorkedHalfMix) {
  // Same chain as the il worked instance, lambda_gae = 0: the il part is
  // 0.65625 and the d0 part is 0.375.
  const auto m = test::three_state_chain(2);
  PolicyTable pi(3, 2);
  for (int s = 0; s < 3; ++s) {
    pi.probs(0, s)[0] = 0.75;
    pi.probs(0, s)[1] = 0.25;
  }
  const auto d = state_distributions(m, pi);
  EXPECT_NEAR(mixed_loss(m, d, Baseline(2, 3), pi, 0.5, 0.0), -(0.5 * 0.65625 + 0.5 * 0.375), 1e-15);
}

TEST(StepWeight, ClosedForms) {
  EXPECT_DOUBLE_EQ(mixed_step_weight(0, 0.3, 0.9), 1.0);
  EXPECT_DOUBLE_EQ(mixed_step_weight(4, 0.0, 1.0), 5.0);
  EXPECT_DOUBLE_EQ(mixed_step_weight(3, 1.0, 0.5), 0.125);
  EXPECT_DOUBLE_EQ(mixed_step_weight(3, 0.0, 0.0), 1.0);
}

TEST(ExactGradient, MatchesFiniteDifferences) {
  const auto m = test::random_mdp(3, 2, 5, 40);
  SoftmaxPolicy policy(3, 2);
  RngStream rng(41);
  for (auto& p : policy.params()) p = rng.normal();
  const auto d = state_distributions(m, policy.table());
  const auto f = random_baseline(rng, 5, 3);
  for (double lm : {0.0, 0.5, 1.0}) {
    for (double lg : {0.0, 0.9}) {
      const auto g = exact_score_gradient(m, d, f, policy, lm, lg);
      const auto fd = exact_loss_gradient(m, d, f, policy, lm, lg);
      for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(test::rel_err(g[i], fd[i]), 1e-6) << lm << " " << lg;
    }
  }
}

TEST(GradientCheck, QuadraticCalibration) {
  // One state, H=1, f=0: mixed loss = -sum_a pi(a) r(a). Its gradient in
  // logits is -pi(a)(r(a) - r(pi)).
  const auto m = build_mdp(1, 2, 1, {1.0, 1.0}, {0.8, 0.2}, {1.0});
  SoftmaxPolicy policy(1, 2);
  policy.params()[0] = 0.3;
  policy.params()[1] = -0.4;
  const auto p = policy.probs(0);
  const double rbar = p[0] * 0.8 + p[1] * 0.2;
  const auto d = state_distributions(m, policy.table());
  const auto fd = exact_loss_gradient(m, d, Baseline(1, 1), policy, 0.5, 0.9);
  EXPECT_NEAR(fd[0], -p[0] * (0.8 - rbar), 1e-8);
  EXPECT_NEAR(fd[1], -p[1] * (0.2 - rbar), 1e-8);
}

TEST(GradientEstimate, ClosedFormTwoActions) {
  // Single state, logits equal, H=1, rewards (1,0), f=0.5: advantages
  // (0.5,-0.5). Expected gradient -sum_a grad pi(a) A(a) = (-0.25, 0.25).
  const auto m = build_mdp(1, 2, 1, {1.0, 1.0}, {1.0, 0.0}, {1.0});
  const auto f = Baseline::stationary(1, std::vector<double>{0.5});
  SoftmaxPolicy policy(1, 2);
  RngStream rng(50);
  const int n = 20000;
  std::vector<double> sum(2, 0.0), sum2(2, 0.0);
  const auto table = policy.table();
  const auto sampler = sampler_for(table);
  for (int i = 0; i < n; ++i) {
    const std::vector<Trajectory> batch{simulate_trajectory(m, sampler, 0, 0, rng)};
    const auto g = policy_gradient_estimate(batch, f, policy, 0.9, 0.5).grad;
    for (int k = 0; k < 2; ++k) {
      sum[k] += g[k];
      sum2[k] += g[k] * g[k];
    }
  }
  const double expected[2] = {-0.25, 0.25};
  for (int k = 0; k < 2; ++k) {
    const double mean = sum[k] / n, se = std::sqrt((sum2[k] / n - mean * mean) / n);
    EXPECT_NEAR(mean, expected[k], 3 * se);
  }
}

TEST(GradientEstimate, ZeroAdvantageHasZeroMean) {
  // Action-independent dynamics and rewards, f = V exactly.
  const int S = 3, A = 2, H = 4;
  std::vector<double> P(S * A * S), R(S * A);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      for (int t = 0; t < S; ++t) P[(s * A + a) * S + t] = (t == s ? 0.5 : 0.25);
      R[s * A + a] = 0.2 * s;
    }
  }
  const auto m = build_mdp(S, A, H, P, R, {1.0, 0.0, 0.0});
  SoftmaxPolicy policy(S, A);
  RngStream rng(60);
  for (auto& p : policy.params()) p = rng.normal();
  const auto table = policy.table();
  const auto f = Baseline::from_values(exact_policy_value(m, table));
  const auto sampler = sampler_for(table);
  const int n = 5000;
  std::vector<double> sum(policy.num_params(), 0.0), sum2(policy.num_params(), 0.0);
  for (int i = 0; i < n; ++i) {
    const std::vector<Trajectory> batch{simulate_trajectory(m, sampler, 0, 0, rng)};
    const auto g = policy_gradient_estimate(batch, f, policy, 0.9, 0.5).grad;
    for (std::size_t k = 0; k < g.size(); ++k) {
      sum[k] += g[k];
      sum2[k] += g[k] * g[k];
    }
  }
  double norm2 = 0.0, se2 = 0.0;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    const double mean = sum[k] / n;
    norm2 += mean * mean;
    se2 += (sum2[k] / n - mean * mean) / n;
  }
  EXPECT_LT(std::sqrt(norm2), 5 * std::sqrt(se2));
}

TEST(GradientEstimate, UndefinedBaselineFlagged) {
  const auto m = test::three_state_chain(3);
  const auto f = Baseline::stationary(3, std::vector<double>{1.0, 0.0, 0.0}, {true, false, false});
  SoftmaxPolicy policy(3, 2);
  RngStream rng(70);
  const auto table = policy.table();
  const std::vector<Trajectory> batch{simulate_trajectory(m, sampler_for(table), 0, 0, rng)};
  const auto est = policy_gradient_estimate(batch, f, policy, 0.9, 0.5);
  EXPECT_EQ(est.steps, 3);
  long expected = 0;
  for (const auto& st : batch[0].steps) expected += st.state != 0;
  EXPECT_EQ(est.undefined_baseline_steps, expected);
  EXPECT_THROW(policy_gradient_estimate(std::vector<Trajectory>{}, f, policy, 0.9, 0.5), std::invalid_argument);
}

TEST(GradientEstimate, ClipWithFreshPolicyMatchesPlain) {
  const auto m = test::random_mdp(3, 2, 4, 80);
  SoftmaxPolicy policy(3, 2);
  RngStream rng(81);
  const auto f = random_baseline(rng, 4, 3);
  const auto table = policy.table();
  std::vector<Trajectory> batch;
  for (int i = 0; i < 5; ++i) batch.push_back(simulate_trajectory(m, sampler_for(table), 0, 0, rng));
  const auto samples = learner_samples(batch, f, policy, 0.9);
  const auto plain = gradient_from_samples(samples, 5, policy, 0.5, 0.9);
  const auto clipped = gradient_from_samples(samples, 5, policy, 0.5, 0.9, 0.2);
  for (std::size_t k = 0; k < plain.size(); ++k) EXPECT_NEAR(plain[k], clipped[k], 1e-14);
}

TEST(PolicyUpdate, ZeroGradientAndShiftInvariance) {
  SoftmaxPolicy policy(2, 3);
  RngStream rng(90);
  for (auto& p : policy.params()) p = rng.normal();
  const auto before = policy.probs(1);
  policy_update(policy, std::vector<double>(policy.num_params(), 0.0), 0.5);
  EXPECT_EQ(policy.probs(1), before);
  // theta[a * dim + s]: the same shift on every action at state 1.
  std::vector<double> shift(policy.num_params(), 0.0);
  for (int a = 0; a < 3; ++a) shift[a * 2 + 1] = 0.7;
  policy_update(policy, shift, 1.0);
  const auto after = policy.probs(1);
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(after[a], before[a], 1e-12);
}

TEST(PolicyUpdate, ConvergesOnQuadraticSurrogate) {
  SoftmaxPolicy policy(1, 2);
  const double target[2] = {1.5, -0.5};
  std::vector<double> g(2);
  for (int i = 0; i < 1000; ++i) {
    for (int k = 0; k < 2; ++k) g[k] = policy.params()[k] - target[k];
    policy_update(policy, g, 0.01);
  }
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(policy.params()[k], target[k], 1e-3);
}

TEST(PolicyUpdate, RejectsBadGradients) {
  SoftmaxPolicy policy(2, 2);
  EXPECT_THROW(policy_update(policy, std::vector<double>(3, 0.0), 0.1), std::invalid_argument);
  std::vector<double> g(4, 0.0);
  g[2] = std::nan("");
  EXPECT_THROW(policy_update(policy, g, 0.1), std::invalid_argument);
  EXPECT_DOUBLE_EQ(inv_sqrt_step(0.4, 4), 0.2);
  EXPECT_THROW(inv_sqrt_step(0.4, 0), std::invalid_argument);
}

TEST(SoftmaxPolicy, LinearFeaturesShareWeights) {
  auto f = std::make_shared<const FeatureMap>(2, 2, std::vector<double>{1.0, 0.0, 1.0, 1.0});
  SoftmaxPolicy policy(2, f);
  EXPECT_EQ(policy.num_params(), 4u);
  policy.params()[0] = 1.0;  // action 0, feature 0
  const auto p0 = policy.probs(0), p1 = policy.probs(1);
  EXPECT_NEAR(p0[0], std::exp(1.0) / (std::exp(1.0) + 1.0), 1e-15);
  EXPECT_NEAR(p1[0], p0[0], 1e-15);
}
