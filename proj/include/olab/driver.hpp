#pragma once

// Per-round roll-in/roll-out loops for MAPS, MAPS-SE, MAMBA and the
// oracle-free RL baseline. Oracles are reached only through OracleSet::act.

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "olab/environments.hpp"
#include "olab/oracle.hpp"
#include "olab/rng.hpp"
#include "olab/softmax_policy.hpp"
#include "olab/value_estimation.hpp"

namespace olab {

enum class Mode { Maps, MapsSe, Mamba, RlOnly };
enum class EstimatorKind { Tabular, Ensemble };
enum class StepSchedule { Constant, InvSqrt };

struct ClipConfig {
  bool enabled = false;
  double epsilon = 0.2;
  int epochs = 4;
};

struct DriverConfig {
  Mode mode = Mode::Maps;
  EstimatorKind estimator = EstimatorKind::Tabular;
  double lambda_mix = 0.5;
  double lambda_gae = 0.9;
  double lambda_est = 1.0;
  double delta = 0.1;
  /// Roll-in switching threshold; MAPS-SE only.
  double gamma_s = std::numeric_limits<double>::infinity();
  EnsembleParams ensemble;
  int oracle_capacity = 19200;
  /// Learner transitions per round; rounded up to whole episodes.
  int learner_capacity = 2048;
  double step_size = 0.1;
  StepSchedule schedule = StepSchedule::Constant;
  ClipConfig clip;
  /// 0 evaluates the learner exactly by DP.
  int eval_episodes = 0;
};

struct BufferEntry {
  int start_state;
  int start_time;
  Trajectory trajectory;
};

/// Fixed-capacity FIFO; pushing into a full buffer drops the oldest entry.
class RolloutBuffer {
 public:
  explicit RolloutBuffer(std::size_t capacity);

  void push(BufferEntry entry);
  void clear() { entries_.clear(); }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<BufferEntry>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::deque<BufferEntry> entries_;
};

struct RoundMetrics {
  std::string run_id;
  std::uint64_t seed = 0;
  long round = 0;
  long env_steps_total = 0;
  long oracle_calls_total = 0;
  int selected_oracle = -1;
  int switch_time = -1;
  int switch_state = -1;
  /// NaN when no switch happened this round; +inf for an unvisited oracle.
  double bonus_at_switch = std::numeric_limits<double>::quiet_NaN();
  double learner_return_eval = 0.0;
  double best_return_so_far = 0.0;
  std::vector<long> selection_counts;
  long undefined_fmax_steps = 0;
};

struct RoundState {
  long round = 0;
  std::uint64_t seed = 0;
  SoftmaxPolicy policy;
  std::vector<RolloutBuffer> oracle_buffers;
  RolloutBuffer learner_buffer;
  std::optional<TabularEstimator> tabular;
  std::optional<EnsembleEstimator> ensemble;
  long env_steps = 0;
  long oracle_calls = 0;
  std::vector<long> selection_counts;
  double best_return = -std::numeric_limits<double>::infinity();
};

/// Learner episodes collected per round (ceil(learner_capacity / H)).
int learner_episodes_per_round(const DriverConfig& cfg, int horizon);

RoundState init_round_state(const Environment& env, int num_oracles, const DriverConfig& cfg, std::uint64_t seed);

/// One round of the configured mode. Every mode consumes exactly
/// H * (learner_episodes_per_round + 1) environment steps.
RoundMetrics run_round(RoundState& rs, const Environment& env, const OracleSet& oracles, const DriverConfig& cfg);

std::vector<RoundMetrics> run_seed(const Environment& env, const OracleSet& oracles, const DriverConfig& cfg,
                                   std::uint64_t seed, long rounds, const std::string& run_id = "");

}  // namespace olab
