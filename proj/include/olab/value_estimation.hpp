#pragma once

// Per-oracle value estimates. Tabular: running mean of roll-out returns keyed
// by the roll-out's start state, with a Hoeffding confidence radius.
// Ensemble: bootstrap-resampled ridge regressors on a shared feature map,
// whose spread stands in for the confidence radius.

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "olab/environments.hpp"
#include "olab/mdp.hpp"
#include "olab/rng.hpp"

namespace olab {

inline constexpr double kUnvisitedBonus = std::numeric_limits<double>::infinity();

/// sqrt(2 H^2 log(2/delta) / N). N = 0 returns the +inf sentinel.
double hoeffding_bonus(long count, double horizon, double delta);

struct DiscreteQuery {
  std::optional<double> estimate;  ///< empty when unvisited
  double bonus = kUnvisitedBonus;
  long count = 0;
};

class TabularEstimator {
 public:
  TabularEstimator(int num_oracles, int num_states, int horizon, double delta, double lambda_est = 1.0);

  /// Adds sum_j lambda_est^j r_j to oracle k's sum at the trajectory's start state.
  void update(int k, const Trajectory& traj);
  DiscreteQuery query(int k, int s) const;

  int num_oracles() const { return num_oracles_; }
  int num_states() const { return num_states_; }
  long count(int k, int s) const { return counts_[index(k, s)]; }
  double return_sum(int k, int s) const { return sums_[index(k, s)]; }
  double lambda_est() const { return lambda_est_; }

 private:
  std::size_t index(int k, int s) const;

  int num_oracles_;
  int num_states_;
  int horizon_;
  double delta_;
  double lambda_est_;
  std::vector<double> sums_;
  std::vector<long> counts_;
};

struct ValueSample {
  int state;
  double target;
};

/// Every (s_j, return-to-go from j) pair of a trajectory.
void append_return_samples(const Trajectory& traj, std::vector<ValueSample>& out, double lambda_est = 1.0);

struct EnsembleParams {
  int members = 5;
  double ridge = 1e-3;
  double init_scale = 1.0;
};

struct EnsembleQuery {
  double mean = 0.0;
  double spread = 0.0;  ///< sample standard deviation across members
};

class EnsembleEstimator {
 public:
  EnsembleEstimator(int num_oracles, std::shared_ptr<const FeatureMap> features, EnsembleParams params,
                    RngStream init_rng);

  /// Refits every member of oracle k on its own bootstrap resample of
  /// `batch`, with the ridge penalty centred on the member's initial weights.
  void fit(int k, std::span<const ValueSample> batch, RngStream& rng);
  EnsembleQuery query(int k, int s) const;

  double member_prediction(int k, int m, int s) const;
  int members() const { return params_.members; }
  int num_oracles() const { return num_oracles_; }
  const FeatureMap& features() const { return *features_; }

 private:
  std::span<double> weights(int k, int m);
  std::span<const double> weights(int k, int m) const;
  std::span<const double> initial(int k, int m) const;

  int num_oracles_;
  std::shared_ptr<const FeatureMap> features_;
  EnsembleParams params_;
  std::vector<double> weights_;
  std::vector<double> initial_;
};

}  // namespace olab
