#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "olab/rng.hpp"

using olab::RngStream;

TEST(Rng, SameSeedSameSequence) {
  RngStream a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  RngStream c(43);
  EXPECT_NE(RngStream(42).next_u64(), c.next_u64());
}

TEST(Rng, SplitDoesNotAdvanceParent) {
  RngStream a(7);
  const auto child1 = a.split(3);
  const auto child2 = a.split(3);
  EXPECT_EQ(child1.key(), child2.key());
  EXPECT_EQ(a.counter(), 0u);
  EXPECT_NE(a.split(4).key(), child1.key());
}

TEST(Rng, UniformMoments) {
  RngStream r(1);
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12, 0.002);
}

TEST(Rng, NormalMoments) {
  RngStream r(2);
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Rng, UniformIntFrequencies) {
  RngStream r(3);
  const int n = 70000, k = 7;
  std::vector<int> c(k, 0);
  for (int i = 0; i < n; ++i) c[r.uniform_int(k)]++;
  const double p = 1.0 / k, sd = std::sqrt(n * p * (1 - p));
  for (int x : c) EXPECT_NEAR(x, n * p, 4 * sd);
  EXPECT_THROW(r.uniform_int(0), std::invalid_argument);
}

TEST(Rng, CategoricalFrequenciesAndZeros) {
  RngStream r(4);
  const std::vector<double> p{0.2, 0.0, 0.5, 0.3};
  std::vector<int> c(4, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) c[r.categorical(p)]++;
  EXPECT_EQ(c[1], 0);
  for (int i : {0, 2, 3}) EXPECT_NEAR(c[i], n * p[i], 4 * std::sqrt(n * p[i] * (1 - p[i])));
  EXPECT_THROW(r.categorical(std::vector<double>{0.0, 0.0}), std::invalid_argument);
}
