#pragma once

// Black-box oracles. Callers can only sample actions; the action table is
// private and readable only through the test/benchmark inspector.

#include <span>
#include <stdexcept>
#include <vector>

#include "olab/mdp.hpp"

namespace olab {

class OracleInspector;

class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Oracle {
 public:
  int id() const { return id_; }
  int act(int state, RngStream& rng) const { return policy_.sample(0, state, rng); }

 private:
  friend class OracleSet;
  friend class OracleInspector;
  Oracle(int id, PolicyTable policy) : id_(id), policy_(std::move(policy)) {}

  int id_;
  PolicyTable policy_;
};

/// Ordered oracles with ids 1..K. Immutable and shareable across runs.
class OracleSet {
 public:
  int size() const { return static_cast<int>(oracles_.size()); }
  /// Throws OracleError for an id outside 1..K.
  const Oracle& at(int id) const;
  int act(int id, int state, RngStream& rng) const { return at(id).act(state, rng); }

  /// Each policy must be stationary and match the MDP shape.
  static OracleSet from_policies(const MdpSpec& mdp, std::vector<PolicyTable> policies);

 private:
  std::vector<Oracle> oracles_;
};

/// Stationary greedy policy on the optimal step-0 Q values, lowest-index ties.
PolicyTable greedy_optimal_policy(const MdpSpec& mdp);

/// Oracle k follows `expertise` (greedy optimal by default) inside block k-1
/// of `regions`, and outside it acts uniformly at random with probability
/// noise[k-1], otherwise following `expertise`. regions[s] is a block in
/// [0, K) and every block must be nonempty.
OracleSet make_region_expert_oracles(const MdpSpec& mdp, std::span<const int> regions,
                                     std::span<const double> noise,
                                     const PolicyTable* expertise = nullptr);

/// Oracle k acts uniformly with probability noise[k-1] and greedily
/// otherwise, at every state.
OracleSet make_noise_graded_oracles(const MdpSpec& mdp, std::span<const double> noise);

}  // namespace olab
