#pragma once

// Run configuration: JSON document -> validated RunConfig, plus builders for
// the configured environment, oracle set and switching threshold.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "olab/driver.hpp"
#include "olab/environments.hpp"
#include "olab/oracle.hpp"

namespace olab {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EnvConfig {
  std::string name;
  std::optional<int> horizon;  ///< environment default when empty
  double slip = 0.1;
  std::optional<int> size;  ///< chain length or point-mass grid side
};

struct OracleConfig {
  std::string kind = "noise_graded";  ///< or "region_experts"
  std::vector<double> noise{0.6, 0.3, 0.05};
};

struct ThresholdConfig {
  std::optional<double> gamma_s;  ///< direct override, may be +inf
  double alpha = 1.0;
  std::vector<double> gaps;
};

struct RunConfig {
  std::string run_id = "run";
  EnvConfig env;
  OracleConfig oracles;
  DriverConfig driver;
  ThresholdConfig threshold;
  long rounds = 100;
  std::vector<std::uint64_t> seeds{0};
  int threads = 0;  ///< 0 picks the hardware concurrency
};

/// Parses and validates a JSON document. Unknown keys are rejected; error
/// messages start with the offending key path.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);

Environment build_environment(const EnvConfig& cfg);
OracleSet build_oracles(const Environment& env, const OracleConfig& cfg);
/// The direct override if given, otherwise the gap-based threshold; +inf
/// when neither is configured.
double resolve_threshold(const ThresholdConfig& cfg, double delta, int horizon, int num_oracles);

}  // namespace olab
