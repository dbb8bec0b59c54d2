#include <gtest/gtest.h>

#include "olab/environments.hpp"
#include "olab/learner_baselines.hpp"
#include "olab/oracle.hpp"
#include "olab/testing/oracle_eval.hpp"
#include "test_util.hpp"

using namespace olab;

namespace {

void expect_same_rows(const PolicyTable& a, const PolicyTable& b, int t, int s) {
  for (int x = 0; x < a.num_actions(); ++x) EXPECT_EQ(a.prob(t, s, x), b.prob(t, s, x)) << "t=" << t << " s=" << s;
}

}  // namespace

TEST(BestSingle, Cases) {
  const auto m = test::random_mdp(3, 2, 4, 1);
  const std::vector<PolicyTable> one{test::random_policy(3, 2, 2)};
  EXPECT_EQ(best_single_oracle(m, one), 1);
  const auto env = make_two_rooms();
  const auto set = make_noise_graded_oracles(env.mdp, std::vector<double>{0.6, 0.3, 0.05});
  EXPECT_EQ(best_single_oracle(env.mdp, OracleInspector::policies(set)), 3);
  const std::vector<PolicyTable> tie{one[0], one[0]};
  EXPECT_EQ(best_single_oracle(m, tie), 1);
}

TEST(MaxFollowing, SingleOracle) {
  const auto m = test::random_mdp(3, 2, 4, 3);
  const std::vector<PolicyTable> p{test::random_policy(3, 2, 4)};
  const std::vector<ValueTable> v{exact_policy_value(m, p[0])};
  const auto mf = max_following_policy(v, p);
  for (int t = 0; t < 4; ++t) {
    for (int s = 0; s < 3; ++s) expect_same_rows(mf, p[0], t, s);
  }
}

TEST(MaxFollowing, RegionExpertsFollowOwnRegion) {
  const int S = 8;
  const auto m = test::two_goal_chain(S, 12);
  std::vector<int> regions(S);
  for (int s = 0; s < S; ++s) regions[s] = s < S / 2 ? 0 : 1;
  const auto set = make_region_expert_oracles(m, regions, std::vector<double>{1.0, 1.0});
  const auto p = OracleInspector::policies(set);
  const auto mf = max_following_policy(oracle_true_values(m, set), p);
  for (int s = 0; s < S; ++s) expect_same_rows(mf, p[regions[s]], 0, s);
}

TEST(MaxFollowing, DominatedOracleNeverFollowed) {
  const auto m = test::action_dominance_mdp(4, 6, 3);
  const std::vector<PolicyTable> p{test::random_policy(4, 2, 5),
                                   PolicyTable::deterministic(4, 2, std::vector<int>{0, 0, 0, 0})};
  std::vector<ValueTable> v{exact_policy_value(m, p[0]), exact_policy_value(m, p[1])};
  const auto mf = max_following_policy(v, p);
  for (int t = 0; t < 6; ++t) {
    for (int s = 0; s < 4; ++s) {
      ASSERT_GT(v[1].at(t, s), v[0].at(t, s));
      expect_same_rows(mf, p[1], t, s);
    }
  }
}

TEST(MaxAggregation, SingleOracleIsOneStepImprovement) {
  const auto m = test::random_mdp(4, 3, 5, 5);
  const auto v = exact_policy_value(m, test::random_policy(4, 3, 6));
  const std::vector<ValueTable> vs{v};
  const auto a = max_aggregation_policy(m, true_fmax(vs));
  const auto b = one_step_improvement(m, v);
  for (int t = 0; t < 5; ++t) {
    for (int s = 0; s < 4; ++s) expect_same_rows(a, b, t, s);
  }
}

TEST(MaxAggregation, ZeroBaselineIsRewardGreedy) {
  const auto m = test::random_mdp(4, 3, 1, 7);
  const auto pi = max_aggregation_policy(m, Baseline(1, 4));
  for (int s = 0; s < 4; ++s) {
    std::vector<double> r(3);
    for (int a = 0; a < 3; ++a) r[a] = m.reward(s, a);
    EXPECT_EQ(pi.prob(0, s, argmax_first(r)), 1.0);
  }
}

TEST(MaxAggregation, WorkedThreeStateChain) {
  // f = V of "always right" with H=3: V_1 = (0,1,2), V_2 = (0,0,1).
  const auto m = test::three_state_chain(3);
  const auto v = exact_policy_value(m, PolicyTable::deterministic(3, 2, std::vector<int>{1, 1, 1}));
  const auto pi = one_step_improvement(m, v);
  EXPECT_EQ(pi.prob(0, 0, 1), 1.0);  // 0 + V_1(1) = 1 > 0.5 + V_1(0) = 0.5
  EXPECT_EQ(pi.prob(1, 0, 0), 1.0);  // 0.5 > 0 + V_2(1) = 0
  EXPECT_EQ(pi.prob(2, 0, 0), 1.0);
  EXPECT_EQ(pi.prob(0, 1, 1), 1.0);
  EXPECT_EQ(pi.prob(0, 2, 0), 1.0);  // tie at the goal goes to action 0
}

TEST(OneStepImprovement, FixedPointAndStrictGain) {
  const auto m = test::three_state_chain(4, 0.2);
  const auto opt = solve_optimal(m);
  std::vector<int> acts;
  for (int t = 0; t < 4; ++t) {
    for (int s = 0; s < 3; ++s) {
      acts.push_back(argmax_first({opt.q.data() + (t * 3 + s) * 2, 2}));
    }
  }
  const auto pstar = PolicyTable::deterministic_timed(3, 2, 4, acts);
  const auto vstar = exact_policy_value(m, pstar);
  const auto vplus = exact_policy_value(m, one_step_improvement(m, vstar));
  for (std::size_t i = 0; i < vstar.values.size(); ++i) EXPECT_NEAR(vplus.values[i], vstar.values[i], 1e-12);

  const auto stay = PolicyTable::deterministic(3, 2, std::vector<int>{0, 0, 0});
  const auto vs = exact_policy_value(m, stay);
  const auto vi = exact_policy_value(m, one_step_improvement(m, vs));
  bool strict = false;
  for (std::size_t i = 0; i < vs.values.size(); ++i) {
    EXPECT_GE(vi.values[i], vs.values[i] - 1e-9);
    strict = strict || vi.values[i] > vs.values[i] + 1e-9;
  }
  EXPECT_TRUE(strict);
}

TEST(OneStepImprovement, ImprovesEverywhereOnRandomMdps) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = test::random_mdp(5, 3, 6, 100 + seed);
    const auto v = exact_policy_value(m, test::random_policy(5, 3, 200 + seed));
    const auto vp = exact_policy_value(m, one_step_improvement(m, v));
    for (std::size_t i = 0; i < v.values.size(); ++i) EXPECT_GE(vp.values[i], v.values[i] - 1e-9);
  }
}
