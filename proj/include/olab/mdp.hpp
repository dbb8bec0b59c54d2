#pragma once

// Finite-horizon tabular MDPs: representation, simulation and exact
// backward-induction evaluators. Returns are undiscounted H-step sums.

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "olab/rng.hpp"

namespace olab {

class MdpError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable after construction; safe to share across concurrent runs.
class MdpSpec {
 public:
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }

  /// P[s][a][.] as a contiguous row of length num_states().
  std::span<const double> next_distribution(int s, int a) const {
    const auto off = (static_cast<std::size_t>(s) * num_actions_ + a) * num_states_;
    return {transition_.data() + off, static_cast<std::size_t>(num_states_)};
  }
  double reward(int s, int a) const { return reward_[static_cast<std::size_t>(s) * num_actions_ + a]; }
  std::span<const double> initial_distribution() const { return initial_; }
  std::span<const double> transition_tensor() const { return transition_; }
  std::span<const double> reward_matrix() const { return reward_; }

  friend MdpSpec build_mdp(int, int, int, std::vector<double>, std::vector<double>, std::vector<double>);

 private:
  MdpSpec() = default;

  int num_states_ = 0;
  int num_actions_ = 0;
  int horizon_ = 0;
  std::vector<double> transition_;
  std::vector<double> reward_;
  std::vector<double> initial_;
};

/// Validates and assembles an MDP. `transition` is P[s][a][s'] flattened
/// row-major, `reward` is R[s][a]. Rows must sum to 1 within 1e-9,
/// rewards must lie in [0,1] and d0 must be a probability vector.
MdpSpec build_mdp(int num_states, int num_actions, int horizon,
                  std::vector<double> transition, std::vector<double> reward,
                  std::vector<double> initial_dist);

/// Action distributions per (t, s). A stationary table has a single layer
/// shared by every time step; a timed table has one layer per step.
class PolicyTable {
 public:
  PolicyTable(int num_states, int num_actions, int layers = 1);

  static PolicyTable uniform(int num_states, int num_actions);
  static PolicyTable deterministic(int num_states, int num_actions, std::span<const int> actions);
  /// actions[t * num_states + s]
  static PolicyTable deterministic_timed(int num_states, int num_actions, int horizon,
                                         std::span<const int> actions);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int layers() const { return layers_; }
  bool stationary() const { return layers_ == 1; }

  std::span<const double> probs(int t, int s) const;
  std::span<double> probs(int t, int s);
  double prob(int t, int s, int a) const { return probs(t, s)[a]; }
  int sample(int t, int s, RngStream& rng) const { return rng.categorical(probs(t, s)); }

  /// Throws MdpError unless every row is a distribution (1e-9).
  void validate() const;

 private:
  std::size_t offset(int t, int s) const {
    const int layer = layers_ == 1 ? 0 : t;
    return (static_cast<std::size_t>(layer) * num_states_ + s) * num_actions_;
  }

  int num_states_;
  int num_actions_;
  int layers_;
  std::vector<double> probs_;
};

struct Step {
  int state;
  int action;
  double reward;
};

struct Trajectory {
  int start_time = 0;
  std::vector<Step> steps;
  /// State reached after the last step when the trajectory stopped before
  /// the horizon (roll-ins); empty when the episode ran to the horizon.
  std::optional<int> terminal_state;

  int start_state() const { return steps.front().state; }
  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  /// sum_j lambda^j r_j
  double discounted_return(double lambda = 1.0) const;
};

using ActionSampler = std::function<int(int state, int t, RngStream& rng)>;

int sample_initial_state(const MdpSpec& mdp, RngStream& rng);
int sample_next_state(const MdpSpec& mdp, int s, int a, RngStream& rng);

/// Rolls `policy` from (start_state, start_time). Runs to the horizon unless
/// max_steps cuts it short, in which case terminal_state is recorded.
Trajectory simulate_trajectory(const MdpSpec& mdp, const ActionSampler& policy, int start_state,
                               int start_time, RngStream& rng,
                               std::optional<int> max_steps = std::nullopt);

/// Holds a reference: `policy` must outlive the sampler.
ActionSampler sampler_for(const PolicyTable& policy);

/// V_t[s] for t in [0, H]; V_H == 0.
struct ValueTable {
  int horizon = 0;
  int num_states = 0;
  std::vector<double> values;
  double initial_value = 0.0;  ///< V_0 averaged over d0

  double at(int t, int s) const { return values[static_cast<std::size_t>(t) * num_states + s]; }
  std::span<const double> row(int t) const {
    return {values.data() + static_cast<std::size_t>(t) * num_states, static_cast<std::size_t>(num_states)};
  }
};

ValueTable exact_policy_value(const MdpSpec& mdp, const PolicyTable& policy);

/// Q(s, a) = R[s,a] + sum_s' P[s'|s,a] next_values[s'] for every (s, a),
/// laid out row-major by state.
std::vector<double> lookahead_q(const MdpSpec& mdp, std::span<const double> next_values);

struct OptimalSolution {
  ValueTable values;
  std::vector<double> q;  ///< Q_t(s, a) at [(t * S + s) * A + a], t < H
  double q_at(int t, int s, int a, int num_states, int num_actions) const {
    return q[(static_cast<std::size_t>(t) * num_states + s) * num_actions + a];
  }
};

OptimalSolution solve_optimal(const MdpSpec& mdp);

/// Index of the largest entry; entries within `tol` of the best count as
/// ties and resolve to the lowest index.
int argmax_first(std::span<const double> values, double tol = 1e-12);

struct StateDistribution {
  std::vector<double> weights;
  std::optional<int> time_index;  ///< empty for the horizon average
};

/// d_t^pi for t = 0..H-1, forward from d0.
std::vector<StateDistribution> state_distributions(const MdpSpec& mdp, const PolicyTable& policy);
/// d^pi = (1/H) sum_t d_t^pi
StateDistribution state_visitation(const MdpSpec& mdp, const PolicyTable& policy);

}  // namespace olab
