#include "olab/learner_baselines.hpp"

#include <stdexcept>

namespace olab {

int best_single_oracle(std::span<const ValueTable> values) {
  if (values.empty()) throw std::invalid_argument("best_single_oracle: no oracles");
  std::vector<double> v;
  for (const auto& t : values) v.push_back(t.initial_value);
  return argmax_first(v) + 1;
}

int best_single_oracle(const MdpSpec& mdp, std::span<const PolicyTable> oracles) {
  std::vector<ValueTable> values;
  for (const auto& p : oracles) values.push_back(exact_policy_value(mdp, p));
  return best_single_oracle(values);
}

PolicyTable max_following_policy(std::span<const ValueTable> values, std::span<const PolicyTable> oracles) {
  if (values.empty() || values.size() != oracles.size()) {
    throw std::invalid_argument("max_following_policy: need one value table per oracle");
  }
  const int H = values.front().horizon;
  const int S = oracles.front().num_states();
  const int A = oracles.front().num_actions();
  PolicyTable out(S, A, H);
  std::vector<double> at(values.size());
  for (int t = 0; t < H; ++t) {
    for (int s = 0; s < S; ++s) {
      for (std::size_t k = 0; k < values.size(); ++k) at[k] = values[k].at(t, s);
      const auto src = oracles[static_cast<std::size_t>(argmax_first(at))].probs(t, s);
      std::copy(src.begin(), src.end(), out.probs(t, s).begin());
    }
  }
  return out;
}

PolicyTable max_aggregation_policy(const MdpSpec& mdp, const Baseline& fmax) {
  const int H = mdp.horizon();
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  std::vector<int> actions(static_cast<std::size_t>(H) * S);
  for (int t = 0; t < H; ++t) {
    const auto q = lookahead_q(mdp, fmax.row(t + 1));
    for (int s = 0; s < S; ++s) {
      actions[static_cast<std::size_t>(t) * S + s] =
          argmax_first({q.data() + static_cast<std::size_t>(s) * A, static_cast<std::size_t>(A)});
    }
  }
  return PolicyTable::deterministic_timed(S, A, H, actions);
}

PolicyTable one_step_improvement(const MdpSpec& mdp, const ValueTable& v) {
  return max_aggregation_policy(mdp, Baseline::from_values(v));
}

}  // namespace olab
