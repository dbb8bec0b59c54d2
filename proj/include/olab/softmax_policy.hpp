#pragma once

// Learner policy: softmax over linear action scores z_a(s) = theta_a . phi(s).
// With one-hot features this is the tabular per-state-logit policy.

#include <memory>
#include <span>
#include <vector>

#include "olab/environments.hpp"
#include "olab/mdp.hpp"

namespace olab {

class SoftmaxPolicy {
 public:
  /// Tabular: one logit per (s, a), all zero (uniform).
  SoftmaxPolicy(int num_states, int num_actions);
  /// Linear over `features`, all weights zero.
  SoftmaxPolicy(int num_actions, std::shared_ptr<const FeatureMap> features);

  int num_states() const { return features_->num_states(); }
  int num_actions() const { return num_actions_; }
  int feature_dim() const { return features_->dim(); }
  /// Parameters laid out as theta[a * feature_dim() + j].
  std::size_t num_params() const { return params_.size(); }
  std::span<const double> params() const { return params_; }
  std::span<double> params() { return params_; }

  void probs(int s, std::span<double> out) const;
  std::vector<double> probs(int s) const;
  /// Stationary table snapshot.
  PolicyTable table() const;

  /// grad += scale * d log pi(a|s) / d theta
  void accumulate_grad_log_prob(int s, int a, double scale, std::span<double> grad) const;
  /// grad += scale * sum_a w_a d pi(a|s) / d theta
  void accumulate_grad_prob(int s, std::span<const double> w, double scale, std::span<double> grad) const;

 private:
  int num_actions_;
  std::shared_ptr<const FeatureMap> features_;
  std::vector<double> params_;
};

/// theta <- theta - step * grad. Throws on a shape mismatch or any
/// non-finite gradient entry.
void policy_update(SoftmaxPolicy& policy, std::span<const double> grad, double step_size);

/// eta0 / sqrt(n) for round n >= 1.
double inv_sqrt_step(double eta0, long round);

}  // namespace olab
