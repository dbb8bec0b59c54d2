#include "olab/oracle.hpp"

#include <string>

namespace olab {

const Oracle& OracleSet::at(int id) const {
  if (id < 1 || id > size()) throw OracleError("unknown oracle id " + std::to_string(id));
  return oracles_[static_cast<std::size_t>(id - 1)];
}

OracleSet OracleSet::from_policies(const MdpSpec& mdp, std::vector<PolicyTable> policies) {
  if (policies.empty()) throw OracleError("oracle set needs at least one oracle");
  OracleSet set;
  int id = 1;
  for (auto& p : policies) {
    if (!p.stationary() || p.num_states() != mdp.num_states() || p.num_actions() != mdp.num_actions()) {
      throw OracleError("oracle policy shape does not match the MDP");
    }
    p.validate();
    set.oracles_.push_back(Oracle(id++, std::move(p)));
  }
  return set;
}

PolicyTable greedy_optimal_policy(const MdpSpec& mdp) {
  const auto sol = solve_optimal(mdp);
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  std::vector<int> actions(static_cast<std::size_t>(S));
  for (int s = 0; s < S; ++s) {
    actions[s] = argmax_first({sol.q.data() + static_cast<std::size_t>(s) * A, static_cast<std::size_t>(A)});
  }
  return PolicyTable::deterministic(S, A, actions);
}

namespace {

void check_noise(double n) {
  if (!(n >= 0.0 && n <= 1.0)) throw OracleError("oracle noise must lie in [0,1]");
}

void blend_uniform(std::span<double> row, double noise) {
  const double u = noise / static_cast<double>(row.size());
  for (double& p : row) p = (1.0 - noise) * p + u;
}

}  // namespace

OracleSet make_region_expert_oracles(const MdpSpec& mdp, std::span<const int> regions,
                                     std::span<const double> noise, const PolicyTable* expertise) {
  const int S = mdp.num_states();
  const int K = static_cast<int>(noise.size());
  if (K < 1) throw OracleError("region experts need at least one oracle");
  if (static_cast<int>(regions.size()) != S) throw OracleError("regions must cover every state");
  std::vector<int> block_size(static_cast<std::size_t>(K), 0);
  for (int b : regions) {
    if (b < 0 || b >= K) throw OracleError("region block id out of range");
    ++block_size[b];
  }
  for (int k = 0; k < K; ++k) {
    if (block_size[k] == 0) throw OracleError("region block " + std::to_string(k) + " is empty");
    check_noise(noise[k]);
  }
  const PolicyTable base = expertise ? *expertise : greedy_optimal_policy(mdp);
  if (!base.stationary()) throw OracleError("expertise policy must be stationary");

  std::vector<PolicyTable> policies;
  for (int k = 0; k < K; ++k) {
    PolicyTable p = base;
    for (int s = 0; s < S; ++s) {
      if (regions[s] != k) blend_uniform(p.probs(0, s), noise[k]);
    }
    policies.push_back(std::move(p));
  }
  return OracleSet::from_policies(mdp, std::move(policies));
}

OracleSet make_noise_graded_oracles(const MdpSpec& mdp, std::span<const double> noise) {
  if (noise.empty()) throw OracleError("noise-graded oracles need at least one noise rate");
  const PolicyTable base = greedy_optimal_policy(mdp);
  std::vector<PolicyTable> policies;
  for (double n : noise) {
    check_noise(n);
    PolicyTable p = base;
    for (int s = 0; s < mdp.num_states(); ++s) blend_uniform(p.probs(0, s), n);
    policies.push_back(std::move(p));
  }
  return OracleSet::from_policies(mdp, std::move(policies));
}

}  // namespace olab
