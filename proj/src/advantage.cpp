#include "olab/advantage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "olab/kernels.hpp"

namespace olab {

Baseline::Baseline(int horizon, int num_states, BaselineSource source)
    : horizon_(horizon),
      num_states_(num_states),
      source_(source),
      values_(static_cast<std::size_t>(horizon + 1) * num_states, 0.0) {
  if (horizon < 1 || num_states < 1) throw std::invalid_argument("Baseline: bad shape");
}

Baseline Baseline::from_values(const ValueTable& v, BaselineSource source) {
  Baseline b(v.horizon, v.num_states, source);
  std::copy(v.values.begin(), v.values.end(), b.values_.begin());
  std::fill(b.values_.end() - v.num_states, b.values_.end(), 0.0);
  return b;
}

Baseline Baseline::stationary(int horizon, std::span<const double> values, std::vector<bool> defined,
                              BaselineSource source) {
  const int S = static_cast<int>(values.size());
  Baseline b(horizon, S, source);
  if (!defined.empty() && static_cast<int>(defined.size()) != S) {
    throw std::invalid_argument("Baseline: defined mask size mismatch");
  }
  b.defined_ = std::move(defined);
  for (int t = 0; t < horizon; ++t) {
    for (int s = 0; s < S; ++s) {
      b.values_[static_cast<std::size_t>(t) * S + s] = b.defined(s) ? values[s] : 0.0;
    }
  }
  return b;
}

double Baseline::operator()(int t, int s) const {
  if (t >= horizon_) return 0.0;
  return values_[static_cast<std::size_t>(t) * num_states_ + s];
}

std::span<const double> Baseline::row(int t) const {
  return {values_.data() + static_cast<std::size_t>(t) * num_states_, static_cast<std::size_t>(num_states_)};
}

std::optional<double> f_max(std::span<const std::optional<double>> values) {
  std::optional<double> best;
  for (const auto& v : values) {
    if (v && (!best || *v > *best)) best = *v;
  }
  return best;
}

Baseline true_fmax(std::span<const ValueTable> values) {
  if (values.empty()) throw std::invalid_argument("true_fmax: no oracles");
  const int H = values.front().horizon;
  const int S = values.front().num_states;
  ValueTable m = values.front();
  for (const auto& v : values.subspan(1)) {
    if (v.horizon != H || v.num_states != S) throw std::invalid_argument("true_fmax: shape mismatch");
    for (std::size_t i = 0; i < m.values.size(); ++i) m.values[i] = std::max(m.values[i], v.values[i]);
  }
  return Baseline::from_values(m, BaselineSource::TrueFmax);
}

Baseline estimated_fmax(const TabularEstimator& est, int horizon) {
  const int S = est.num_states();
  std::vector<double> vals(static_cast<std::size_t>(S), 0.0);
  std::vector<bool> defined(static_cast<std::size_t>(S), false);
  std::vector<std::optional<double>> per_oracle(static_cast<std::size_t>(est.num_oracles()));
  for (int s = 0; s < S; ++s) {
    for (int k = 1; k <= est.num_oracles(); ++k) per_oracle[k - 1] = est.query(k, s).estimate;
    if (const auto m = f_max(per_oracle)) {
      vals[s] = *m;
      defined[s] = true;
    }
  }
  return Baseline::stationary(horizon, vals, std::move(defined), BaselineSource::EstimatedFmax);
}

Baseline estimated_fmax(const EnsembleEstimator& est, int horizon) {
  const int S = est.features().num_states();
  std::vector<double> vals(static_cast<std::size_t>(S));
  for (int s = 0; s < S; ++s) {
    double best = est.query(1, s).mean;
    for (int k = 2; k <= est.num_oracles(); ++k) best = std::max(best, est.query(k, s).mean);
    vals[s] = best;
  }
  return Baseline::stationary(horizon, vals, {}, BaselineSource::EstimatedFmax);
}

double generalized_q(const MdpSpec& mdp, const Baseline& f, int t, int s, int a) {
  return mdp.reward(s, a) + kernels::dot(mdp.next_distribution(s, a), f.row(std::min(t + 1, f.horizon())));
}

double advantage_f(const MdpSpec& mdp, const Baseline& f, int t, int s, int a) {
  return generalized_q(mdp, f, t, s, a) - f(t, s);
}

namespace {

// f at the state following segment step l (l + 1 steps taken).
double next_f(const Trajectory& seg, const Baseline& f, std::size_t l) {
  const int t = seg.start_time + static_cast<int>(l) + 1;
  if (l + 1 < seg.size()) return f(t, seg.steps[l + 1].state);
  if (seg.terminal_state) return f(t, *seg.terminal_state);
  return 0.0;
}

double delta_at(const Trajectory& seg, const Baseline& f, std::size_t l) {
  const auto& st = seg.steps[l];
  return st.reward + next_f(seg, f, l) - f(seg.start_time + static_cast<int>(l), st.state);
}

void check_step(const Trajectory& seg, int j) {
  if (j < 0 || static_cast<std::size_t>(j) >= seg.size()) throw std::out_of_range("segment step out of range");
}

}  // namespace

double i_step_advantage(const Trajectory& seg, const Baseline& f, int j, int i) {
  check_step(seg, j);
  if (i < 0) throw std::invalid_argument("i_step_advantage: negative i");
  const std::size_t n = seg.size();
  std::size_t last = static_cast<std::size_t>(j) + i;
  if (last >= n) {
    if (seg.terminal_state) throw std::invalid_argument("i_step_advantage: segment too short for i");
    last = n - 1;
  }
  double total = 0.0;
  for (std::size_t l = j; l <= last; ++l) total += seg.steps[l].reward;
  total += next_f(seg, f, last);
  return total - f(seg.start_time + j, seg.steps[j].state);
}

double lambda_advantage(const Trajectory& seg, const Baseline& f, double lambda, int j) {
  check_step(seg, j);
  const int T = static_cast<int>(seg.size()) - 1 - j;
  double total = 0.0;
  double w = 1.0;
  for (int i = 0; i < T; ++i) {
    total += (1.0 - lambda) * w * i_step_advantage(seg, f, j, i);
    w *= lambda;
  }
  return total + w * i_step_advantage(seg, f, j, T);
}

double lambda_advantage_telescoped(const Trajectory& seg, const Baseline& f, double lambda, int j) {
  check_step(seg, j);
  double total = 0.0;
  double w = 1.0;
  for (std::size_t l = j; l < seg.size(); ++l) {
    total += w * delta_at(seg, f, l);
    w *= lambda;
  }
  return total;
}

std::vector<double> gae_advantages(const Trajectory& seg, const Baseline& f, double lambda) {
  std::vector<double> out(seg.size());
  double acc = 0.0;
  for (std::size_t l = seg.size(); l-- > 0;) {
    acc = delta_at(seg, f, l) + lambda * acc;
    out[l] = acc;
  }
  return out;
}

AdvantageTable lambda_advantage_exact(const MdpSpec& mdp, const Baseline& f, const PolicyTable& pi, double lambda) {
  const int H = mdp.horizon();
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  if (f.horizon() != H || f.num_states() != S) throw std::invalid_argument("baseline shape mismatch");
  AdvantageTable g{H, S, A, std::vector<double>(static_cast<std::size_t>(H) * S * A, 0.0)};
  std::vector<double> follow(static_cast<std::size_t>(S), 0.0);  // sum_a pi G_{t+1}
  std::vector<double> next(static_cast<std::size_t>(S));
  for (int t = H - 1; t >= 0; --t) {
    const auto ft1 = f.row(t + 1);
    for (int s = 0; s < S; ++s) next[s] = ft1[s] + lambda * follow[s];
    const auto q = lookahead_q(mdp, next);
    for (int s = 0; s < S; ++s) {
      const double fs = f(t, s);
      double* out = g.values.data() + (static_cast<std::size_t>(t) * S + s) * A;
      for (int a = 0; a < A; ++a) out[a] = q[static_cast<std::size_t>(s) * A + a] - fs;
      follow[s] = kernels::dot(pi.probs(t, s), g.row(t, s));
    }
  }
  return g;
}

namespace {

void check_dists(const MdpSpec& mdp, std::span<const StateDistribution> d) {
  if (static_cast<int>(d.size()) != mdp.horizon()) {
    throw std::invalid_argument("expected one state distribution per time step");
  }
}

}  // namespace

double il_loss(const MdpSpec& mdp, std::span<const StateDistribution> d, const Baseline& f, const PolicyTable& pi) {
  check_dists(mdp, d);
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  double total = 0.0;
  for (int t = 0; t < mdp.horizon(); ++t) {
    const auto q = lookahead_q(mdp, f.row(t + 1));
    for (int s = 0; s < S; ++s) {
      const double w = d[t].weights[s];
      if (w == 0.0) continue;
      const auto p = pi.probs(t, s);
      double adv = 0.0;
      for (int a = 0; a < A; ++a) adv += p[a] * (q[static_cast<std::size_t>(s) * A + a] - f(t, s));
      total += w * adv;
    }
  }
  return -total;
}

double mixed_loss(const MdpSpec& mdp, std::span<const StateDistribution> d, const Baseline& f,
                  const PolicyTable& pi, double lambda_mix, double lambda_gae) {
  check_dists(mdp, d);
  if (!(lambda_mix >= 0.0 && lambda_mix <= 1.0)) throw std::invalid_argument("lambda_mix must lie in [0,1]");
  if (!(lambda_gae >= 0.0 && lambda_gae <= 1.0)) throw std::invalid_argument("lambda_gae must lie in [0,1]");
  const auto g = lambda_advantage_exact(mdp, f, pi, lambda_gae);
  const int S = mdp.num_states();
  double il = 0.0;
  for (int t = 0; t < mdp.horizon(); ++t) {
    for (int s = 0; s < S; ++s) {
      const double w = d[t].weights[s];
      if (w != 0.0) il += w * kernels::dot(pi.probs(t, s), g.row(t, s));
    }
  }
  double rl = 0.0;
  const auto d0 = mdp.initial_distribution();
  for (int s = 0; s < S; ++s) {
    if (d0[s] != 0.0) rl += d0[s] * kernels::dot(pi.probs(0, s), g.row(0, s));
  }
  return -(1.0 - lambda_mix) * il - lambda_mix * rl;
}

double mixed_step_weight(int t, double lambda_mix, double lambda_gae) {
  double partial = 0.0;
  double p = 1.0;
  for (int j = 0; j <= t; ++j) {
    partial += p;
    if (j < t) p *= lambda_gae;
  }
  return (1.0 - lambda_mix) * partial + lambda_mix * p;
}

std::vector<double> exact_score_gradient(const MdpSpec& mdp, std::span<const StateDistribution> d,
                                         const Baseline& f, const SoftmaxPolicy& policy, double lambda_mix,
                                         double lambda_gae) {
  check_dists(mdp, d);
  const auto pi = policy.table();
  const auto g = lambda_advantage_exact(mdp, f, pi, lambda_gae);
  std::vector<double> grad(policy.num_params(), 0.0);
  for (int t = 0; t < mdp.horizon(); ++t) {
    const double w = mixed_step_weight(t, lambda_mix, lambda_gae);
    for (int s = 0; s < mdp.num_states(); ++s) {
      const double ds = d[t].weights[s];
      if (ds != 0.0) policy.accumulate_grad_prob(s, g.row(t, s), -w * ds, grad);
    }
  }
  return grad;
}

std::vector<LearnerSample> learner_samples(std::span<const Trajectory> batch, const Baseline& f,
                                           const SoftmaxPolicy& policy, double lambda_gae,
                                           long* undefined_baseline_steps) {
  std::vector<LearnerSample> out;
  long undefined = 0;
  for (const auto& traj : batch) {
    const auto adv = gae_advantages(traj, f, lambda_gae);
    for (std::size_t j = 0; j < traj.size(); ++j) {
      const auto& st = traj.steps[j];
      if (!f.defined(st.state)) ++undefined;
      out.push_back({traj.start_time + static_cast<int>(j), st.state, st.action, adv[j],
                     policy.probs(st.state)[static_cast<std::size_t>(st.action)]});
    }
  }
  if (undefined_baseline_steps) *undefined_baseline_steps = undefined;
  return out;
}

std::vector<double> gradient_from_samples(std::span<const LearnerSample> samples, long num_episodes,
                                          const SoftmaxPolicy& policy, double lambda_mix, double lambda_gae,
                                          std::optional<double> clip_epsilon) {
  if (num_episodes < 1) throw std::invalid_argument("gradient estimate needs at least one episode");
  std::vector<double> grad(policy.num_params(), 0.0);
  const double inv = 1.0 / static_cast<double>(num_episodes);
  for (const auto& x : samples) {
    const double w = mixed_step_weight(x.time, lambda_mix, lambda_gae);
    double scale = -w * x.advantage * inv;
    if (clip_epsilon) {
      const double ratio = policy.probs(x.state)[static_cast<std::size_t>(x.action)] / x.behavior_prob;
      if ((x.advantage > 0.0 && ratio > 1.0 + *clip_epsilon) || (x.advantage < 0.0 && ratio < 1.0 - *clip_epsilon)) {
        continue;
      }
      scale *= ratio;
    }
    policy.accumulate_grad_log_prob(x.state, x.action, scale, grad);
  }
  return grad;
}

GradientEstimate policy_gradient_estimate(std::span<const Trajectory> batch, const Baseline& f,
                                          const SoftmaxPolicy& policy, double lambda_gae, double lambda_mix) {
  if (batch.empty()) throw std::invalid_argument("policy_gradient_estimate: empty batch");
  GradientEstimate out;
  const auto samples = learner_samples(batch, f, policy, lambda_gae, &out.undefined_baseline_steps);
  out.steps = static_cast<long>(samples.size());
  out.grad = gradient_from_samples(samples, static_cast<long>(batch.size()), policy, lambda_mix, lambda_gae);
  return out;
}

}  // namespace olab
