#pragma once

// Reference policies built from exact oracle values: the single best oracle,
// max-following, max-aggregation and one-step improvement. Model-based, so
// for tests and benchmarks.

#include <span>
#include <vector>

#include "olab/advantage.hpp"
#include "olab/mdp.hpp"

namespace olab {

/// Id (1..K) of the oracle with the highest V^k(d0); ties to the lowest id.
int best_single_oracle(std::span<const ValueTable> values);
int best_single_oracle(const MdpSpec& mdp, std::span<const PolicyTable> oracles);

/// Timed policy acting at (t, s) as oracle argmax_k V_t^k(s).
PolicyTable max_following_policy(std::span<const ValueTable> values, std::span<const PolicyTable> oracles);

/// Timed deterministic policy argmax_a r(s,a) + E f_{t+1}(s').
PolicyTable max_aggregation_policy(const MdpSpec& mdp, const Baseline& fmax);

/// Greedy one-step lookahead on an exact value table.
PolicyTable one_step_improvement(const MdpSpec& mdp, const ValueTable& v);

}  // namespace olab
