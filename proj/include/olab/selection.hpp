#pragma once

// Oracle selection rules and the roll-in switching threshold.

#include <limits>
#include <span>
#include <vector>

#include "olab/rng.hpp"
#include "olab/value_estimation.hpp"

namespace olab {

enum class Branch { Discrete, Continuous };
enum class SelectionRule { Active, Uniform };

struct OracleScore {
  double estimate = 0.0;  ///< 0 for unvisited oracles
  double bonus = kUnvisitedBonus;
  double ucb() const { return estimate + bonus; }
};

struct SelectionDecision {
  int chosen_k = 0;  ///< oracle id in 1..K
  std::vector<OracleScore> scores;
  SelectionRule rule = SelectionRule::Active;
};

/// argmax_k estimate + bonus over ids 1..K. Infinite bonuses outrank every
/// finite score; ties go to the lowest id.
SelectionDecision select_kstar(std::span<const OracleScore> scores);
SelectionDecision uniform_select(int num_oracles, RngStream& rng);

/// Scores of every oracle at state s from either estimator.
std::vector<OracleScore> oracle_scores(const TabularEstimator& est, int s);
std::vector<OracleScore> oracle_scores(const EnsembleEstimator& est, int s);

/// Bonus of oracle k at s: Hoeffding radius (tabular) or ensemble spread.
double exploration_bonus_gamma(const TabularEstimator& est, int k, int s);
double exploration_bonus_gamma(const EnsembleEstimator& est, int k, int s);

struct ThresholdSpec {
  double alpha = 1.0;
  double delta = 0.1;
  std::vector<double> gaps;
  double horizon = 1.0;
  int num_oracles = 1;
};

/// alpha * sqrt(2 H^2 log(2/delta) / (K + sum_i (H^2/gap_i^2) log(K/delta)))
double uncertainty_threshold(const ThresholdSpec& spec);

/// Switch once the selected oracle's bonus reaches the threshold (inclusive).
/// An infinite threshold never fires, not even for an unvisited oracle.
inline bool should_switch(double bonus, double threshold) {
  return threshold < std::numeric_limits<double>::infinity() && bonus >= threshold;
}

}  // namespace olab
