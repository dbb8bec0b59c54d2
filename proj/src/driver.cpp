#include "olab/driver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "olab/advantage.hpp"
#include "olab/selection.hpp"

namespace olab {

namespace {

// Sub-stream ids within a round.
enum : std::uint64_t {
  kSwitchTime = 1,
  kSelect = 2,
  kRollIn = 3,
  kRollOut = 4,
  kLearner = 5,
  kFit = 6,
  kEval = 7,
};
constexpr std::uint64_t kEnsembleInit = 0xE115;

ActionSampler learner_sampler(const SoftmaxPolicy& policy) {
  return [&policy](int s, int, RngStream& rng) {
    std::vector<double> p(static_cast<std::size_t>(policy.num_actions()));
    policy.probs(s, p);
    return rng.categorical(p);
  };
}

ActionSampler oracle_sampler(const OracleSet& oracles, int k) {
  return [&oracles, k](int s, int, RngStream& rng) { return oracles.act(k, s, rng); };
}

std::vector<OracleScore> scores_at(const RoundState& rs, int s) {
  return rs.tabular ? oracle_scores(*rs.tabular, s) : oracle_scores(*rs.ensemble, s);
}

double gamma_at(const RoundState& rs, int k, int s) {
  return rs.tabular ? exploration_bonus_gamma(*rs.tabular, k, s) : exploration_bonus_gamma(*rs.ensemble, k, s);
}

void update_estimator(RoundState& rs, int k, const Trajectory& traj, const DriverConfig& cfg, RngStream& rng) {
  if (rs.tabular) {
    rs.tabular->update(k, traj);
    return;
  }
  std::vector<ValueSample> batch;
  for (const auto& e : rs.oracle_buffers[static_cast<std::size_t>(k - 1)].entries()) {
    append_return_samples(e.trajectory, batch, cfg.lambda_est);
  }
  rs.ensemble->fit(k, batch, rng);
}

}  // namespace

RolloutBuffer::RolloutBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("RolloutBuffer: capacity must be positive");
}

void RolloutBuffer::push(BufferEntry entry) {
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.push_back(std::move(entry));
}

int learner_episodes_per_round(const DriverConfig& cfg, int horizon) {
  return std::max(1, (cfg.learner_capacity + horizon - 1) / horizon);
}

RoundState init_round_state(const Environment& env, int num_oracles, const DriverConfig& cfg, std::uint64_t seed) {
  const auto& mdp = env.mdp;
  auto features = std::make_shared<const FeatureMap>(env.features);
  SoftmaxPolicy policy = env.featurized ? SoftmaxPolicy(mdp.num_actions(), features)
                                        : SoftmaxPolicy(mdp.num_states(), mdp.num_actions());
  const int episodes = learner_episodes_per_round(cfg, mdp.horizon()) + (cfg.mode == Mode::RlOnly ? 1 : 0);
  RoundState rs{0,
                seed,
                std::move(policy),
                std::vector<RolloutBuffer>(static_cast<std::size_t>(num_oracles),
                                           RolloutBuffer(static_cast<std::size_t>(cfg.oracle_capacity))),
                RolloutBuffer(static_cast<std::size_t>(episodes)),
                std::nullopt,
                std::nullopt,
                0,
                0,
                std::vector<long>(static_cast<std::size_t>(num_oracles), 0),
                -std::numeric_limits<double>::infinity()};
  if (cfg.estimator == EstimatorKind::Tabular) {
    rs.tabular.emplace(num_oracles, mdp.num_states(), mdp.horizon(), cfg.delta, cfg.lambda_est);
  } else {
    rs.ensemble.emplace(num_oracles, features, cfg.ensemble, RngStream(seed).split(kEnsembleInit));
  }
  return rs;
}

RoundMetrics run_round(RoundState& rs, const Environment& env, const OracleSet& oracles, const DriverConfig& cfg) {
  const auto& mdp = env.mdp;
  const int H = mdp.horizon();
  const int K = oracles.size();
  rs.round += 1;
  const RngStream round_rng = RngStream(rs.seed).split(static_cast<std::uint64_t>(rs.round));
  RngStream switch_rng = round_rng.split(kSwitchTime);
  RngStream select_rng = round_rng.split(kSelect);
  RngStream rollin_rng = round_rng.split(kRollIn);
  RngStream rollout_rng = round_rng.split(kRollOut);
  RngStream learner_rng = round_rng.split(kLearner);
  RngStream fit_rng = round_rng.split(kFit);
  RngStream eval_rng = round_rng.split(kEval);

  RoundMetrics m;
  m.seed = rs.seed;
  m.round = rs.round;
  const auto learner = learner_sampler(rs.policy);

  if (cfg.mode != Mode::RlOnly) {
    int s = sample_initial_state(mdp, rollin_rng);
    std::optional<int> switch_time;
    int chosen = -1;
    double bonus = 0.0;
    if (cfg.mode == Mode::MapsSe) {
      for (int t = 0; t < H; ++t) {
        const auto d = select_kstar(scores_at(rs, s));
        const double g = gamma_at(rs, d.chosen_k, s);
        if (should_switch(g, cfg.gamma_s)) {
          switch_time = t;
          chosen = d.chosen_k;
          bonus = g;
          break;
        }
        const int a = learner(s, t, rollin_rng);
        rs.env_steps += 1;
        s = sample_next_state(mdp, s, a, rollin_rng);
      }
    } else {
      const int te = switch_rng.uniform_int(H);
      if (te > 0) {
        const auto rollin = simulate_trajectory(mdp, learner, s, 0, rollin_rng, te);
        rs.env_steps += static_cast<long>(rollin.size());
        s = *rollin.terminal_state;
      }
      switch_time = te;
      chosen = cfg.mode == Mode::Mamba ? uniform_select(K, select_rng).chosen_k : select_kstar(scores_at(rs, s)).chosen_k;
      bonus = gamma_at(rs, chosen, s);
    }
    if (switch_time) {
      auto rollout = simulate_trajectory(mdp, oracle_sampler(oracles, chosen), s, *switch_time, rollout_rng);
      rs.env_steps += static_cast<long>(rollout.size());
      rs.oracle_calls += 1;
      rs.selection_counts[static_cast<std::size_t>(chosen - 1)] += 1;
      rs.oracle_buffers[static_cast<std::size_t>(chosen - 1)].push({s, *switch_time, rollout});
      update_estimator(rs, chosen, rollout, cfg, fit_rng);
      m.selected_oracle = chosen;
      m.switch_time = *switch_time;
      m.switch_state = s;
      m.bonus_at_switch = bonus;
    }
  }

  // D'_n: full-horizon learner episodes, disjoint from the oracle data.
  rs.learner_buffer.clear();
  for (std::size_t b = 0; b < rs.learner_buffer.capacity(); ++b) {
    const int s0 = sample_initial_state(mdp, learner_rng);
    auto traj = simulate_trajectory(mdp, learner, s0, 0, learner_rng);
    rs.env_steps += static_cast<long>(traj.size());
    rs.learner_buffer.push({s0, 0, std::move(traj)});
  }
  std::vector<Trajectory> batch;
  for (const auto& e : rs.learner_buffer.entries()) batch.push_back(e.trajectory);

  const double lambda_mix = cfg.mode == Mode::RlOnly ? 1.0 : cfg.lambda_mix;
  const Baseline fhat = rs.tabular ? estimated_fmax(*rs.tabular, H) : estimated_fmax(*rs.ensemble, H);
  const auto samples = learner_samples(batch, fhat, rs.policy, cfg.lambda_gae, &m.undefined_fmax_steps);
  const double eta = cfg.schedule == StepSchedule::InvSqrt ? inv_sqrt_step(cfg.step_size, rs.round) : cfg.step_size;
  const long episodes = static_cast<long>(batch.size());
  if (cfg.clip.enabled) {
    for (int e = 0; e < cfg.clip.epochs; ++e) {
      const auto g = gradient_from_samples(samples, episodes, rs.policy, lambda_mix, cfg.lambda_gae, cfg.clip.epsilon);
      policy_update(rs.policy, g, eta);
    }
  } else {
    policy_update(rs.policy, gradient_from_samples(samples, episodes, rs.policy, lambda_mix, cfg.lambda_gae), eta);
  }
  rs.learner_buffer.clear();

  if (cfg.eval_episodes <= 0) {
    m.learner_return_eval = exact_policy_value(mdp, rs.policy.table()).initial_value;
  } else {
    const auto eval = learner_sampler(rs.policy);
    double total = 0.0;
    for (int e = 0; e < cfg.eval_episodes; ++e) {
      total += simulate_trajectory(mdp, eval, sample_initial_state(mdp, eval_rng), 0, eval_rng).discounted_return();
    }
    m.learner_return_eval = total / cfg.eval_episodes;
  }
  rs.best_return = std::max(rs.best_return, m.learner_return_eval);
  m.best_return_so_far = rs.best_return;
  m.env_steps_total = rs.env_steps;
  m.oracle_calls_total = rs.oracle_calls;
  m.selection_counts = rs.selection_counts;
  return m;
}

std::vector<RoundMetrics> run_seed(const Environment& env, const OracleSet& oracles, const DriverConfig& cfg,
                                   std::uint64_t seed, long rounds, const std::string& run_id) {
  RoundState rs = init_round_state(env, oracles.size(), cfg, seed);
  std::vector<RoundMetrics> rows;
  rows.reserve(static_cast<std::size_t>(std::max(0L, rounds)));
  for (long n = 0; n < rounds; ++n) {
    rows.push_back(run_round(rs, env, oracles, cfg));
    rows.back().run_id = run_id;
  }
  return rows;
}

}  // namespace olab
