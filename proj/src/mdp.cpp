#include "olab/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "olab/kernels.hpp"

namespace olab {

namespace {

constexpr double kStochasticTol = 1e-9;

bool is_distribution(std::span<const double> row) {
  double total = 0.0;
  for (double p : row) {
    if (!(p >= 0.0) || !std::isfinite(p)) return false;
    total += p;
  }
  return std::abs(total - 1.0) <= kStochasticTol;
}

}  // namespace

MdpSpec build_mdp(int num_states, int num_actions, int horizon, std::vector<double> transition,
                  std::vector<double> reward, std::vector<double> initial_dist) {
  if (num_states <= 0 || num_actions <= 0 || horizon <= 0) {
    throw MdpError("build_mdp: num_states, num_actions and horizon must be positive");
  }
  const auto S = static_cast<std::size_t>(num_states);
  const auto A = static_cast<std::size_t>(num_actions);
  if (transition.size() != S * A * S) throw MdpError("build_mdp: transition tensor has wrong size");
  if (reward.size() != S * A) throw MdpError("build_mdp: reward matrix has wrong size");
  if (initial_dist.size() != S) throw MdpError("build_mdp: initial distribution has wrong size");

  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      std::span<const double> row(transition.data() + (s * A + a) * S, S);
      if (!is_distribution(row)) {
        throw MdpError("build_mdp: P[" + std::to_string(s) + "][" + std::to_string(a) +
                       "] is not a probability vector");
      }
      const double r = reward[s * A + a];
      if (!(r >= 0.0 && r <= 1.0)) {
        throw MdpError("build_mdp: R[" + std::to_string(s) + "][" + std::to_string(a) + "] outside [0,1]");
      }
    }
  }
  if (!is_distribution(initial_dist)) throw MdpError("build_mdp: d0 is not a probability vector");

  MdpSpec mdp;
  mdp.num_states_ = num_states;
  mdp.num_actions_ = num_actions;
  mdp.horizon_ = horizon;
  mdp.transition_ = std::move(transition);
  mdp.reward_ = std::move(reward);
  mdp.initial_ = std::move(initial_dist);
  return mdp;
}

PolicyTable::PolicyTable(int num_states, int num_actions, int layers)
    : num_states_(num_states), num_actions_(num_actions), layers_(layers) {
  if (num_states <= 0 || num_actions <= 0 || layers <= 0) {
    throw MdpError("PolicyTable: dimensions must be positive");
  }
  probs_.assign(static_cast<std::size_t>(layers) * num_states * num_actions, 0.0);
}

PolicyTable PolicyTable::uniform(int num_states, int num_actions) {
  PolicyTable p(num_states, num_actions);
  std::fill(p.probs_.begin(), p.probs_.end(), 1.0 / num_actions);
  return p;
}

PolicyTable PolicyTable::deterministic(int num_states, int num_actions, std::span<const int> actions) {
  if (actions.size() != static_cast<std::size_t>(num_states)) {
    throw MdpError("PolicyTable::deterministic: need one action per state");
  }
  PolicyTable p(num_states, num_actions);
  for (int s = 0; s < num_states; ++s) p.probs(0, s)[actions[s]] = 1.0;
  return p;
}

PolicyTable PolicyTable::deterministic_timed(int num_states, int num_actions, int horizon,
                                             std::span<const int> actions) {
  if (actions.size() != static_cast<std::size_t>(num_states) * horizon) {
    throw MdpError("PolicyTable::deterministic_timed: need one action per (t, s)");
  }
  PolicyTable p(num_states, num_actions, horizon);
  for (int t = 0; t < horizon; ++t) {
    for (int s = 0; s < num_states; ++s) p.probs(t, s)[actions[static_cast<std::size_t>(t) * num_states + s]] = 1.0;
  }
  return p;
}

std::span<const double> PolicyTable::probs(int t, int s) const {
  return {probs_.data() + offset(t, s), static_cast<std::size_t>(num_actions_)};
}

std::span<double> PolicyTable::probs(int t, int s) {
  return {probs_.data() + offset(t, s), static_cast<std::size_t>(num_actions_)};
}

void PolicyTable::validate() const {
  for (int l = 0; l < layers_; ++l) {
    for (int s = 0; s < num_states_; ++s) {
      if (!is_distribution(probs(l, s))) {
        throw MdpError("PolicyTable: row (" + std::to_string(l) + ", " + std::to_string(s) +
                       ") is not a distribution");
      }
    }
  }
}

double Trajectory::discounted_return(double lambda) const {
  double total = 0.0;
  double w = 1.0;
  for (const Step& st : steps) {
    total += w * st.reward;
    w *= lambda;
  }
  return total;
}

int sample_initial_state(const MdpSpec& mdp, RngStream& rng) {
  return rng.categorical(mdp.initial_distribution());
}

int sample_next_state(const MdpSpec& mdp, int s, int a, RngStream& rng) {
  return rng.categorical(mdp.next_distribution(s, a));
}

Trajectory simulate_trajectory(const MdpSpec& mdp, const ActionSampler& policy, int start_state,
                               int start_time, RngStream& rng, std::optional<int> max_steps) {
  const int H = mdp.horizon();
  if (start_time < 0 || start_time >= H) throw MdpError("simulate_trajectory: start_time must be in [0, H)");
  if (start_state < 0 || start_state >= mdp.num_states()) throw MdpError("simulate_trajectory: bad start state");
  int length = H - start_time;
  if (max_steps) length = std::min(length, std::max(*max_steps, 0));

  Trajectory traj;
  traj.start_time = start_time;
  traj.steps.reserve(static_cast<std::size_t>(length));
  int s = start_state;
  for (int j = 0; j < length; ++j) {
    const int t = start_time + j;
    const int a = policy(s, t, rng);
    traj.steps.push_back({s, a, mdp.reward(s, a)});
    s = sample_next_state(mdp, s, a, rng);
  }
  if (start_time + length < H) traj.terminal_state = s;
  return traj;
}

ActionSampler sampler_for(const PolicyTable& policy) {
  return [&policy](int s, int t, RngStream& rng) { return policy.sample(t, s, rng); };
}

std::vector<double> lookahead_q(const MdpSpec& mdp, std::span<const double> next_values) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  std::vector<double> q(static_cast<std::size_t>(S) * A);
  kernels::gemv(mdp.transition_tensor(), static_cast<std::size_t>(S) * A, static_cast<std::size_t>(S),
                next_values, q);
  const auto r = mdp.reward_matrix();
  for (std::size_t i = 0; i < q.size(); ++i) q[i] += r[i];
  return q;
}

ValueTable exact_policy_value(const MdpSpec& mdp, const PolicyTable& policy) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  if (policy.num_states() != S || policy.num_actions() != A) {
    throw MdpError("exact_policy_value: policy shape does not match the MDP");
  }
  if (!policy.stationary() && policy.layers() < H) {
    throw MdpError("exact_policy_value: timed policy needs one layer per step");
  }
  ValueTable v{H, S, std::vector<double>(static_cast<std::size_t>(H + 1) * S, 0.0), 0.0};
  for (int t = H - 1; t >= 0; --t) {
    const auto q = lookahead_q(mdp, v.row(t + 1));
    double* out = v.values.data() + static_cast<std::size_t>(t) * S;
    for (int s = 0; s < S; ++s) {
      out[s] = kernels::dot(policy.probs(t, s), std::span<const double>(q.data() + static_cast<std::size_t>(s) * A, A));
    }
  }
  v.initial_value = kernels::dot(mdp.initial_distribution(), v.row(0));
  return v;
}

int argmax_first(std::span<const double> values, double tol) {
  if (values.empty()) throw std::invalid_argument("argmax_first: empty input");
  int best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best] + tol * (1.0 + std::abs(values[best]))) best = static_cast<int>(i);
  }
  return best;
}

OptimalSolution solve_optimal(const MdpSpec& mdp) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  OptimalSolution sol;
  sol.values = ValueTable{H, S, std::vector<double>(static_cast<std::size_t>(H + 1) * S, 0.0), 0.0};
  sol.q.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int t = H - 1; t >= 0; --t) {
    const auto q = lookahead_q(mdp, sol.values.row(t + 1));
    std::copy(q.begin(), q.end(), sol.q.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(t) * S * A));
    double* out = sol.values.values.data() + static_cast<std::size_t>(t) * S;
    for (int s = 0; s < S; ++s) {
      const auto row = std::span<const double>(q.data() + static_cast<std::size_t>(s) * A, A);
      out[s] = *std::max_element(row.begin(), row.end());
    }
  }
  sol.values.initial_value = kernels::dot(mdp.initial_distribution(), sol.values.row(0));
  return sol;
}

std::vector<StateDistribution> state_distributions(const MdpSpec& mdp, const PolicyTable& policy) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  std::vector<StateDistribution> out;
  out.reserve(static_cast<std::size_t>(H));
  std::vector<double> d(mdp.initial_distribution().begin(), mdp.initial_distribution().end());
  for (int t = 0; t < H; ++t) {
    out.push_back({d, t});
    if (t + 1 == H) break;
    std::vector<double> next(static_cast<std::size_t>(S), 0.0);
    for (int s = 0; s < S; ++s) {
      if (d[s] == 0.0) continue;
      for (int a = 0; a < A; ++a) {
        const double w = d[s] * policy.prob(t, s, a);
        if (w == 0.0) continue;
        kernels::axpy(w, mdp.next_distribution(s, a), next);
      }
    }
    d = std::move(next);
  }
  return out;
}

StateDistribution state_visitation(const MdpSpec& mdp, const PolicyTable& policy) {
  const auto per_time = state_distributions(mdp, policy);
  StateDistribution avg{std::vector<double>(static_cast<std::size_t>(mdp.num_states()), 0.0), std::nullopt};
  const double w = 1.0 / static_cast<double>(per_time.size());
  for (const auto& d : per_time) kernels::axpy(w, d.weights, avg.weights);
  return avg;
}

}  // namespace olab
