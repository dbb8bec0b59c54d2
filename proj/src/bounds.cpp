#include "olab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "olab/learner_baselines.hpp"

namespace olab {

void validate_bound_inputs(const BoundInputs& in) {
  if (in.K < 1) throw std::invalid_argument("bounds: K must be at least 1");
  if (!(in.H > 0.0)) throw std::invalid_argument("bounds: H must be positive");
  if (!(in.delta > 0.0 && in.delta < 1.0)) throw std::invalid_argument("bounds: delta must lie in (0,1)");
  if (!(in.alpha > 0.0)) throw std::invalid_argument("bounds: alpha must be positive");
  for (double g : in.gaps) {
    if (!(g > 0.0)) throw std::invalid_argument("bounds: gaps must be positive");
  }
  if (in.a) {
    if (!in.T) throw std::invalid_argument("bounds: the analysis constant a needs T");
    if (*in.a < 0.0 || *in.a > analysis_constant_max(*in.T, in.K, in.gaps)) {
      throw std::invalid_argument("bounds: analysis constant a above its admissible maximum");
    }
  }
}

double gap_sum(const BoundInputs& in) {
  double total = 0.0;
  for (double g : in.gaps) total += in.H * in.H / (g * g);
  return total;
}

double t_aps(const BoundInputs& in) {
  validate_bound_inputs(in);
  return in.K + gap_sum(in) * std::log(in.K / in.delta);
}

double t_uniform(const BoundInputs& in) {
  validate_bound_inputs(in);
  return in.K * gap_sum(in) * std::log(in.K / in.delta);
}

double gamma_threshold_bound(const BoundInputs& in) {
  validate_bound_inputs(in);
  const double denom = in.K + gap_sum(in) * std::log(2.0 * in.K / in.delta);
  return std::sqrt(2.0 * in.H * in.H * std::log(4.0 / in.delta) / denom);
}

double analysis_constant_max(double T, int K, std::span<const double> gaps) {
  double inv = 0.0;
  for (double g : gaps) {
    if (!(g > 0.0)) throw std::invalid_argument("bounds: gaps must be positive");
    inv += 1.0 / (g * g);
  }
  if (inv == 0.0) return std::numeric_limits<double>::infinity();
  return 25.0 * (T - K) / (36.0 * inv);
}

RegretTerms regret_terms(const MdpSpec& mdp, std::span<const PolicyTable> learner,
                         std::span<const PolicyTable> oracles, bool featurized) {
  if (featurized) throw std::invalid_argument("regret_terms: needs a tabular environment");
  if (learner.empty() || oracles.empty()) throw std::invalid_argument("regret_terms: empty input");
  std::vector<ValueTable> values;
  for (const auto& p : oracles) values.push_back(exact_policy_value(mdp, p));
  const Baseline fmax = true_fmax(values);
  const PolicyTable pimax = max_aggregation_policy(mdp, fmax);

  const double N = static_cast<double>(learner.size());
  double sum_max = 0.0;
  double sum_learner = 0.0;
  std::vector<double> sum_oracle(oracles.size(), 0.0);
  for (const auto& pn : learner) {
    const auto d = state_distributions(mdp, pn);
    sum_max += il_loss(mdp, d, fmax, pimax);
    sum_learner += il_loss(mdp, d, fmax, pn);
    for (std::size_t k = 0; k < oracles.size(); ++k) sum_oracle[k] += il_loss(mdp, d, fmax, oracles[k]);
  }
  const double best = *std::min_element(sum_oracle.begin(), sum_oracle.end());
  return {-sum_max / N, (best - sum_max) / N, sum_learner - best};
}

double performance_lower_bound(const BoundInputs& in, double max_oracle_value, double zeta, double epsilon,
                               std::optional<RegretTerms> terms, bool uniform) {
  validate_bound_inputs(in);
  double bound = max_oracle_value + zeta - epsilon;
  if (terms) {
    if (!in.N || *in.N <= 0.0) throw std::invalid_argument("bounds: N must be positive");
    return bound - terms->regret / *in.N;
  }
  const double N = in.N.value_or(std::numeric_limits<double>::infinity());
  if (!(N > 0.0)) throw std::invalid_argument("bounds: N must be positive");
  const double T = uniform ? t_uniform(in) : t_aps(in);
  const double S = in.num_states.value_or(1.0);
  const double C = in.C.value_or(1.0);
  if (!(C >= 1.0)) throw std::invalid_argument("bounds: coverage ratio C must be at least 1");
  const double beta_max = in.beta_max.value_or(0.0);
  if (beta_max != 0.0) bound -= uniform ? T * beta_max / N : T * S * beta_max / (C * N);
  bound -= in.beta.value_or(0.0);
  const double v = in.v.value_or(0.0);
  if (v != 0.0) bound -= std::sqrt(v / N);
  return bound;
}

}  // namespace olab
