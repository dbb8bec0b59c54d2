#pragma once

// Single-state best-oracle identification benchmark. Arm k's episode return
// is a sum of H Bernoulli(V_k / H) rewards, so it lies in [0, H] with mean V_k.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace olab {

enum class BanditStrategy { Active, Uniform };

struct BanditConfig {
  int K = 2;
  int H = 10;
  /// Gaps of the K-1 suboptimal arms below the best arm's H/2. A single
  /// entry is repeated for every suboptimal arm.
  std::vector<double> gaps{0.5};
  /// Explicit arm means, overriding H/2 and gaps when set.
  std::optional<std::vector<double>> values;
  double delta = 0.1;
  long budget = 5000;
  BanditStrategy strategy = BanditStrategy::Active;
  std::vector<std::uint64_t> seeds{0};
  /// Place the best arm at a seed-dependent random position.
  bool shuffle_best = true;
};

struct BanditRun {
  std::uint64_t seed = 0;
  int best_arm = 1;  ///< id in 1..K
  /// First round after which every arm has been pulled and the empirical
  /// best is the true best for the rest of the budget; budget + 1 if censored.
  long identification_round = 0;
  bool censored = false;
  long suboptimal_pulls = 0;
};

std::vector<BanditRun> bandit_bench(const BanditConfig& cfg);

struct BanditSummary {
  double median_identification = 0.0;  ///< censored runs rank as budget + 1
  long censored = 0;
  double mean_suboptimal_pulls = 0.0;
};

BanditSummary summarize(std::span<const BanditRun> runs);

}  // namespace olab
