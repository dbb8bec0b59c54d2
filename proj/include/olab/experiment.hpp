#pragma once

#include <vector>

#include "olab/config.hpp"
#include "olab/driver.hpp"

namespace olab {

/// Runs every configured seed (concurrently on a worker pool) and returns
/// the rows seed-major in configuration order, round-minor.
std::vector<RoundMetrics> run_experiment(const RunConfig& cfg);

}  // namespace olab
