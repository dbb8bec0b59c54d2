#include <gtest/gtest.h>

#include <numeric>

#include "olab/environments.hpp"

using namespace olab;

namespace {

void expect_valid(const Environment& env) {
  const auto& m = env.mdp;
  for (int s = 0; s < m.num_states(); ++s) {
    for (int a = 0; a < m.num_actions(); ++a) {
      const auto row = m.next_distribution(s, a);
      EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
    }
  }
  ASSERT_EQ(env.regions.size(), static_cast<std::size_t>(m.num_states()));
  std::vector<int> seen(env.num_regions, 0);
  for (int r : env.regions) {
    ASSERT_GE(r, 0);
    ASSERT_LT(r, env.num_regions);
    seen[r]++;
  }
  for (int c : seen) EXPECT_GT(c, 0);
  EXPECT_EQ(env.features.num_states(), m.num_states());
  for (int s = 0; s < m.num_states(); ++s) EXPECT_EQ(env.features.nonzeros(s).size(), 2u);
}

}  // namespace

TEST(Environments, TwoRoomsLayout) {
  const auto env = make_two_rooms();
  expect_valid(env);
  EXPECT_EQ(env.mdp.num_states(), 21);
  EXPECT_EQ(env.mdp.num_actions(), grid::kNumMoves);
  EXPECT_EQ(env.mdp.horizon(), 30);
  EXPECT_EQ(env.mdp.initial_distribution()[0], 1.0);
  EXPECT_FALSE(env.featurized);
  // Only the goal pays, for every action.
  int rewarding = 0;
  for (int s = 0; s < 21; ++s) rewarding += env.mdp.reward(s, grid::Stay) > 0.0;
  EXPECT_EQ(rewarding, 1);
  EXPECT_EQ(env.mdp.reward(20, grid::Up), 1.0);
}

TEST(Environments, TwoRoomsSlipIsUniformReplacement) {
  const auto env = make_two_rooms({30, 0.0});
  // Start (0,0): Right leads to (0,1), which is state 1.
  EXPECT_EQ(env.mdp.next_distribution(0, grid::Right)[1], 1.0);
  EXPECT_EQ(env.mdp.next_distribution(0, grid::Up)[0], 1.0);
  const auto slippy = make_two_rooms({30, 0.5});
  // Up and Left are blocked at (0,0): 0.5 * (3/5) stays, 0.5 + 0.5/5 moves right.
  EXPECT_NEAR(slippy.mdp.next_distribution(0, grid::Right)[1], 0.6, 1e-15);
  EXPECT_NEAR(slippy.mdp.next_distribution(0, grid::Right)[0], 0.3, 1e-15);
}

TEST(Environments, ChainRewardsAndSlip) {
  const auto env = make_chain();
  expect_valid(env);
  EXPECT_EQ(env.mdp.num_states(), 10);
  EXPECT_EQ(env.mdp.horizon(), 15);
  EXPECT_EQ(env.mdp.initial_distribution()[1], 1.0);
  EXPECT_DOUBLE_EQ(env.mdp.reward(0, 0), 0.1);
  EXPECT_DOUBLE_EQ(env.mdp.reward(9, 1), 1.0);
  EXPECT_NEAR(env.mdp.next_distribution(4, 1)[5], 0.9, 1e-15);
  EXPECT_NEAR(env.mdp.next_distribution(4, 1)[3], 0.1, 1e-15);
  EXPECT_THROW(make_chain({1, 5, 0.1}), std::invalid_argument);
}

TEST(Environments, PointMassIsFeaturized) {
  const auto env = make_point_mass();
  expect_valid(env);
  EXPECT_TRUE(env.featurized);
  EXPECT_EQ(env.mdp.num_states(), 100);
  EXPECT_EQ(env.features.dim(), 128);
  int goal = 0;
  for (int s = 0; s < 100; ++s) goal += env.mdp.reward(s, 0) > 0.0;
  EXPECT_EQ(goal, 4);
}

TEST(TileCoding, OneActiveFeaturePerTiling) {
  const std::vector<double> xs{0.0, 0.5, 0.999}, ys{0.0, 0.5, 0.999};
  const auto f = tile_coding(xs, ys, 3, 4);
  EXPECT_EQ(f.dim(), 48);
  for (int s = 0; s < 3; ++s) {
    const auto nz = f.nonzeros(s);
    ASSERT_EQ(nz.size(), 3u);
    for (int k = 0; k < 3; ++k) {
      EXPECT_GE(nz[k], k * 16);
      EXPECT_LT(nz[k], (k + 1) * 16);
    }
  }
  EXPECT_THROW(tile_coding(xs, std::vector<double>{0.1}), std::invalid_argument);
}

TEST(FeatureMap, OneHot) {
  const auto f = FeatureMap::one_hot(4);
  for (int s = 0; s < 4; ++s) {
    ASSERT_EQ(f.nonzeros(s).size(), 1u);
    EXPECT_EQ(f.nonzeros(s)[0], s);
  }
  EXPECT_THROW(FeatureMap(2, 2, {1.0}), std::invalid_argument);
}
