#include "olab/value_estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "olab/kernels.hpp"

namespace olab {

double hoeffding_bonus(long count, double horizon, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("hoeffding_bonus: delta must lie in (0,1)");
  if (count < 0) throw std::invalid_argument("hoeffding_bonus: negative count");
  if (count == 0) return kUnvisitedBonus;
  return std::sqrt(2.0 * horizon * horizon * std::log(2.0 / delta) / static_cast<double>(count));
}

TabularEstimator::TabularEstimator(int num_oracles, int num_states, int horizon, double delta, double lambda_est)
    : num_oracles_(num_oracles),
      num_states_(num_states),
      horizon_(horizon),
      delta_(delta),
      lambda_est_(lambda_est),
      sums_(static_cast<std::size_t>(num_oracles) * num_states, 0.0),
      counts_(static_cast<std::size_t>(num_oracles) * num_states, 0) {
  if (num_oracles < 1 || num_states < 1 || horizon < 1) throw std::invalid_argument("TabularEstimator: bad shape");
  if (!(lambda_est > 0.0 && lambda_est <= 1.0)) throw std::invalid_argument("lambda_est must lie in (0,1]");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
}

std::size_t TabularEstimator::index(int k, int s) const {
  if (k < 1 || k > num_oracles_) throw std::out_of_range("oracle id out of range");
  if (s < 0 || s >= num_states_) throw std::out_of_range("state out of range");
  return static_cast<std::size_t>(k - 1) * num_states_ + s;
}

void TabularEstimator::update(int k, const Trajectory& traj) {
  if (traj.empty()) throw std::invalid_argument("update: empty trajectory");
  const auto i = index(k, traj.start_state());
  sums_[i] += traj.discounted_return(lambda_est_);
  counts_[i] += 1;
}

DiscreteQuery TabularEstimator::query(int k, int s) const {
  const auto i = index(k, s);
  DiscreteQuery q;
  q.count = counts_[i];
  if (q.count > 0) q.estimate = sums_[i] / static_cast<double>(q.count);
  q.bonus = hoeffding_bonus(q.count, horizon_, delta_);
  return q;
}

void append_return_samples(const Trajectory& traj, std::vector<ValueSample>& out, double lambda_est) {
  const std::size_t first = out.size();
  out.resize(first + traj.size());
  double g = 0.0;
  for (std::size_t j = traj.size(); j-- > 0;) {
    g = traj.steps[j].reward + lambda_est * g;
    out[first + j] = {traj.steps[j].state, g};
  }
}

EnsembleEstimator::EnsembleEstimator(int num_oracles, std::shared_ptr<const FeatureMap> features,
                                     EnsembleParams params, RngStream init_rng)
    : num_oracles_(num_oracles), features_(std::move(features)), params_(params) {
  if (num_oracles < 1 || !features_) throw std::invalid_argument("EnsembleEstimator: bad shape");
  if (params_.members < 1) throw std::invalid_argument("ensemble needs at least one member");
  if (!(params_.ridge > 0.0)) throw std::invalid_argument("ensemble ridge must be positive");
  const std::size_t n = static_cast<std::size_t>(num_oracles) * params_.members * features_->dim();
  initial_.resize(n);
  for (double& w : initial_) w = params_.init_scale * init_rng.normal();
  weights_ = initial_;
}

std::span<double> EnsembleEstimator::weights(int k, int m) {
  const std::size_t d = features_->dim();
  return {weights_.data() + (static_cast<std::size_t>(k - 1) * params_.members + m) * d, d};
}
std::span<const double> EnsembleEstimator::weights(int k, int m) const {
  const std::size_t d = features_->dim();
  return {weights_.data() + (static_cast<std::size_t>(k - 1) * params_.members + m) * d, d};
}
std::span<const double> EnsembleEstimator::initial(int k, int m) const {
  const std::size_t d = features_->dim();
  return {initial_.data() + (static_cast<std::size_t>(k - 1) * params_.members + m) * d, d};
}

void EnsembleEstimator::fit(int k, std::span<const ValueSample> batch, RngStream& rng) {
  if (k < 1 || k > num_oracles_) throw std::out_of_range("oracle id out of range");
  if (batch.empty()) return;
  const int S = features_->num_states();
  const int d = features_->dim();
  for (const auto& x : batch) {
    if (x.state < 0 || x.state >= S) throw std::invalid_argument("ensemble_fit: state outside the feature map");
  }
  const int n = static_cast<int>(batch.size());
  // Resampled points collapse onto per-state weight and target sums, since
  // the features depend on the state only.
  std::vector<double> state_weight(static_cast<std::size_t>(S));
  std::vector<double> state_target(static_cast<std::size_t>(S));
  for (int m = 0; m < params_.members; ++m) {
    std::fill(state_weight.begin(), state_weight.end(), 0.0);
    std::fill(state_target.begin(), state_target.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const auto& x = batch[static_cast<std::size_t>(rng.uniform_int(n))];
      state_weight[x.state] += 1.0;
      state_target[x.state] += x.target;
    }
    const auto w0 = initial(k, m);
    Eigen::MatrixXd gram = params_.ridge * Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd rhs = params_.ridge * Eigen::Map<const Eigen::VectorXd>(w0.data(), d);
    for (int s = 0; s < S; ++s) {
      if (state_weight[s] == 0.0) continue;
      const auto nz = features_->nonzeros(s);
      const auto phi = features_->row(s);
      for (int a : nz) {
        rhs(a) += phi[a] * state_target[s];
        for (int b : nz) gram(a, b) += state_weight[s] * phi[a] * phi[b];
      }
    }
    const Eigen::VectorXd w = gram.llt().solve(rhs);
    auto out = weights(k, m);
    for (int j = 0; j < d; ++j) out[j] = w(j);
  }
}

double EnsembleEstimator::member_prediction(int k, int m, int s) const {
  if (k < 1 || k > num_oracles_) throw std::out_of_range("oracle id out of range");
  return kernels::dot(weights(k, m), features_->row(s));
}

EnsembleQuery EnsembleEstimator::query(int k, int s) const {
  const int M = params_.members;
  std::vector<double> preds(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) preds[m] = member_prediction(k, m, s);
  EnsembleQuery q;
  q.mean = kernels::sum(preds) / M;
  if (std::all_of(preds.begin(), preds.end(), [&](double p) { return p == preds.front(); })) {
    q.mean = preds.front();
  } else {
    double ss = 0.0;
    for (double p : preds) ss += (p - q.mean) * (p - q.mean);
    q.spread = std::sqrt(ss / (M - 1));
  }
  return q;
}

}  // namespace olab
