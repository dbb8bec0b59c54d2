#pragma once

// Closed-form sample-complexity and performance bounds. Big-O constants are
// taken as 1, so every value is an order estimate.

#include <optional>
#include <span>
#include <vector>

#include "olab/advantage.hpp"
#include "olab/mdp.hpp"

namespace olab {

struct BoundInputs {
  int K = 1;
  double H = 1.0;
  std::vector<double> gaps;  ///< one per suboptimal oracle
  double delta = 0.1;
  double alpha = 1.0;
  std::optional<double> T;
  std::optional<double> a;
  std::optional<double> num_states;
  std::optional<double> C;
  std::optional<double> beta_max;
  std::optional<double> beta;
  std::optional<double> v;
  std::optional<double> N;
};

/// Throws std::invalid_argument on K < 1, delta outside (0,1), a gap <= 0,
/// or an analysis constant a above its admissible maximum.
void validate_bound_inputs(const BoundInputs& in);

/// sum_i H^2 / gap_i^2
double gap_sum(const BoundInputs& in);
/// K + gap_sum * log(K/delta)
double t_aps(const BoundInputs& in);
/// K * gap_sum * log(K/delta)
double t_uniform(const BoundInputs& in);
/// sqrt(2 H^2 log(4/delta) / (K + gap_sum * log(2K/delta)))
double gamma_threshold_bound(const BoundInputs& in);
/// 25 (T - K) / (36 sum_i gap_i^-2)
double analysis_constant_max(double T, int K, std::span<const double> gaps);

struct RegretTerms {
  double zeta = 0.0;
  double epsilon = 0.0;
  double regret = 0.0;
};

/// Online-learning decomposition over rounds n = 1..N, using the exact
/// imitation loss l_n(pi) = il_loss(d^{pi_n}, f^max, pi). `learner` holds
/// pi_1..pi_N; `oracles` is the comparator class. Tabular MDPs only.
RegretTerms regret_terms(const MdpSpec& mdp, std::span<const PolicyTable> learner,
                         std::span<const PolicyTable> oracles, bool featurized = false);

/// With `terms`: E_{d0}[max_k V^k] + zeta - epsilon - regret / N.
/// Without: E_{d0}[max_k V^k] + zeta - epsilon - t_aps |S| beta_max / (C N)
/// - beta - sqrt(v / N). With `uniform` the coverage term is t_uniform beta_max / N.
double performance_lower_bound(const BoundInputs& in, double max_oracle_value, double zeta, double epsilon,
                               std::optional<RegretTerms> terms = std::nullopt, bool uniform = false);

}  // namespace olab
