#include "olab/softmax_policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "olab/kernels.hpp"

namespace olab {

SoftmaxPolicy::SoftmaxPolicy(int num_states, int num_actions)
    : SoftmaxPolicy(num_actions, std::make_shared<const FeatureMap>(FeatureMap::one_hot(num_states))) {}

SoftmaxPolicy::SoftmaxPolicy(int num_actions, std::shared_ptr<const FeatureMap> features)
    : num_actions_(num_actions), features_(std::move(features)) {
  if (num_actions < 1 || !features_) throw std::invalid_argument("SoftmaxPolicy: bad shape");
  params_.assign(static_cast<std::size_t>(num_actions) * features_->dim(), 0.0);
}

void SoftmaxPolicy::probs(int s, std::span<double> out) const {
  const std::size_t d = features_->dim();
  const auto phi = features_->row(s);
  const auto nz = features_->nonzeros(s);
  for (int a = 0; a < num_actions_; ++a) {
    const double* th = params_.data() + a * d;
    double z = 0.0;
    for (int j : nz) z += th[j] * phi[j];
    out[a] = z;
  }
  const double zmax = *std::max_element(out.begin(), out.begin() + num_actions_);
  double total = 0.0;
  for (int a = 0; a < num_actions_; ++a) {
    out[a] = std::exp(out[a] - zmax);
    total += out[a];
  }
  for (int a = 0; a < num_actions_; ++a) out[a] /= total;
}

std::vector<double> SoftmaxPolicy::probs(int s) const {
  std::vector<double> p(static_cast<std::size_t>(num_actions_));
  probs(s, p);
  return p;
}

PolicyTable SoftmaxPolicy::table() const {
  PolicyTable t(num_states(), num_actions_);
  for (int s = 0; s < num_states(); ++s) probs(s, t.probs(0, s));
  return t;
}

void SoftmaxPolicy::accumulate_grad_log_prob(int s, int a, double scale, std::span<double> grad) const {
  const std::size_t d = features_->dim();
  const auto p = probs(s);
  const auto phi = features_->row(s);
  for (int b = 0; b < num_actions_; ++b) {
    const double c = scale * ((b == a ? 1.0 : 0.0) - p[b]);
    double* g = grad.data() + b * d;
    for (int j : features_->nonzeros(s)) g[j] += c * phi[j];
  }
}

void SoftmaxPolicy::accumulate_grad_prob(int s, std::span<const double> w, double scale,
                                         std::span<double> grad) const {
  const std::size_t d = features_->dim();
  const auto p = probs(s);
  const double mean = kernels::dot(p, w.first(static_cast<std::size_t>(num_actions_)));
  const auto phi = features_->row(s);
  for (int b = 0; b < num_actions_; ++b) {
    const double c = scale * p[b] * (w[b] - mean);
    double* g = grad.data() + b * d;
    for (int j : features_->nonzeros(s)) g[j] += c * phi[j];
  }
}

void policy_update(SoftmaxPolicy& policy, std::span<const double> grad, double step_size) {
  if (grad.size() != policy.num_params()) throw std::invalid_argument("policy_update: gradient shape mismatch");
  for (double g : grad) {
    if (!std::isfinite(g)) throw std::invalid_argument("policy_update: non-finite gradient");
  }
  kernels::axpy(-step_size, grad, policy.params());
}

double inv_sqrt_step(double eta0, long round) {
  if (round < 1) throw std::invalid_argument("inv_sqrt_step: rounds start at 1");
  return eta0 / std::sqrt(static_cast<double>(round));
}

}  // namespace olab
