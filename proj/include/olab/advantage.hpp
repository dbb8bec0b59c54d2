#pragma once

// Baselines, generalized advantages, lambda-weighted advantages, the
// imitation and mixed losses, and the score-function gradient estimator.
//
// Time indexing: a baseline is a table f_t(s) for t in [0, H] with f_H = 0.
// Trajectory step j of a segment starting at time t0 sits at time t0 + j.

#include <optional>
#include <span>
#include <vector>

#include "olab/mdp.hpp"
#include "olab/softmax_policy.hpp"
#include "olab/value_estimation.hpp"

namespace olab {

enum class BaselineSource { TrueFmax, EstimatedFmax, Custom };

class Baseline {
 public:
  /// f == 0 everywhere, all states defined.
  Baseline(int horizon, int num_states, BaselineSource source = BaselineSource::Custom);

  /// f_t = V_t.
  static Baseline from_values(const ValueTable& v, BaselineSource source = BaselineSource::Custom);
  /// The same per-state values at every t < H. Undefined states read as 0.
  static Baseline stationary(int horizon, std::span<const double> values, std::vector<bool> defined = {},
                             BaselineSource source = BaselineSource::Custom);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  BaselineSource source() const { return source_; }
  bool defined(int s) const { return defined_.empty() || defined_[static_cast<std::size_t>(s)]; }
  /// f_t(s); 0 for t >= H and for undefined states.
  double operator()(int t, int s) const;
  std::span<const double> row(int t) const;

 private:
  int horizon_;
  int num_states_;
  BaselineSource source_;
  std::vector<double> values_;  ///< (H+1) x S, row H zero
  std::vector<bool> defined_;
};

/// max over defined values; empty if none is defined.
std::optional<double> f_max(std::span<const std::optional<double>> values);

/// f_t(s) = max_k V_t^k(s).
Baseline true_fmax(std::span<const ValueTable> values);
/// max_k of the estimated values; undefined where every oracle is unvisited.
Baseline estimated_fmax(const TabularEstimator& est, int horizon);
Baseline estimated_fmax(const EnsembleEstimator& est, int horizon);

/// r(s,a) + E_{s'} f_{t+1}(s')
double generalized_q(const MdpSpec& mdp, const Baseline& f, int t, int s, int a);
/// Q^f_t(s,a) - f_t(s)
double advantage_f(const MdpSpec& mdp, const Baseline& f, int t, int s, int a);

/// r_j + ... + r_{j+i} + f(s_{j+i+1}) - f(s_j) for the segment step j.
/// When the horizon arrives first the sum stops there and the terminal
/// f-term is 0. A segment cut short before the horizon must cover j+i.
double i_step_advantage(const Trajectory& seg, const Baseline& f, int j, int i);
/// (1-lambda) sum_{i<T} lambda^i A_(i) + lambda^T A_(T), T the last feasible i.
double lambda_advantage(const Trajectory& seg, const Baseline& f, double lambda, int j = 0);
/// sum_i lambda^i delta_{j+i}
double lambda_advantage_telescoped(const Trajectory& seg, const Baseline& f, double lambda, int j = 0);
/// Telescoped form at every step of the segment, by one backward pass.
std::vector<double> gae_advantages(const Trajectory& seg, const Baseline& f, double lambda);

/// G_t(s,a) = E[sum_l lambda^l delta_{t+l} | s_t=s, a_t=a], later actions from pi.
struct AdvantageTable {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> values;  ///< [(t * S + s) * A + a]
  double at(int t, int s, int a) const {
    return values[(static_cast<std::size_t>(t) * num_states + s) * num_actions + a];
  }
  std::span<const double> row(int t, int s) const {
    return {values.data() + (static_cast<std::size_t>(t) * num_states + s) * num_actions,
            static_cast<std::size_t>(num_actions)};
  }
};

AdvantageTable lambda_advantage_exact(const MdpSpec& mdp, const Baseline& f, const PolicyTable& pi, double lambda);

/// -sum_t sum_s d_t(s) sum_a pi(a|s) A^f_t(s,a), i.e. -H E_{s~d}[A^f(s,pi)]
/// with d the horizon average of the per-step distributions.
double il_loss(const MdpSpec& mdp, std::span<const StateDistribution> d, const Baseline& f, const PolicyTable& pi);

/// -(1-lambda_mix) sum_t E_{d_t}[A_lambda(s,pi)] - lambda_mix E_{d0}[A_lambda(s,pi)],
/// with A_lambda computed under pi itself and d held fixed.
double mixed_loss(const MdpSpec& mdp, std::span<const StateDistribution> d, const Baseline& f,
                  const PolicyTable& pi, double lambda_mix, double lambda_gae);

/// Per-step weight the mixed loss places on step t's score term when the
/// visitation is frozen at the current policy:
/// (1-lambda_mix) sum_{j<=t} lambda_gae^j + lambda_mix lambda_gae^t.
double mixed_step_weight(int t, double lambda_mix, double lambda_gae);

/// Gradient of mixed_loss at the policy's own parameters, with d = d^{pi}
/// frozen. Only valid when `d` is the visitation of `policy` itself.
std::vector<double> exact_score_gradient(const MdpSpec& mdp, std::span<const StateDistribution> d,
                                         const Baseline& f, const SoftmaxPolicy& policy, double lambda_mix,
                                         double lambda_gae);

struct LearnerSample {
  int time;
  int state;
  int action;
  double advantage;
  double behavior_prob;  ///< pi_n(a|s) when the sample was collected
};

struct GradientEstimate {
  std::vector<double> grad;
  long steps = 0;
  long undefined_baseline_steps = 0;
};

/// Flattens full-horizon learner episodes into advantage-labelled samples.
std::vector<LearnerSample> learner_samples(std::span<const Trajectory> batch, const Baseline& f,
                                           const SoftmaxPolicy& policy, double lambda_gae,
                                           long* undefined_baseline_steps = nullptr);

/// -(1/M) sum over samples of w_t * grad log pi(a|s) * A over M episodes.
/// With `clip_epsilon` set, uses the clipped importance-ratio surrogate
/// against the behaviour probabilities instead.
std::vector<double> gradient_from_samples(std::span<const LearnerSample> samples, long num_episodes,
                                          const SoftmaxPolicy& policy, double lambda_mix, double lambda_gae,
                                          std::optional<double> clip_epsilon = std::nullopt);

/// Score-function estimate of the mixed-loss gradient from learner episodes.
GradientEstimate policy_gradient_estimate(std::span<const Trajectory> batch, const Baseline& f,
                                          const SoftmaxPolicy& policy, double lambda_gae, double lambda_mix);

}  // namespace olab
