#include "olab/selection.hpp"

#include <cmath>
#include <stdexcept>

namespace olab {

SelectionDecision select_kstar(std::span<const OracleScore> scores) {
  if (scores.empty()) throw std::invalid_argument("select_kstar: empty score list");
  SelectionDecision d;
  d.scores.assign(scores.begin(), scores.end());
  d.rule = SelectionRule::Active;
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    const bool inf_k = std::isinf(scores[k].bonus);
    const bool inf_best = std::isinf(scores[best].bonus);
    if (inf_best) continue;
    if (inf_k || scores[k].ucb() > scores[best].ucb()) best = k;
  }
  d.chosen_k = static_cast<int>(best) + 1;
  return d;
}

SelectionDecision uniform_select(int num_oracles, RngStream& rng) {
  if (num_oracles < 1) throw std::invalid_argument("uniform_select: need K >= 1");
  SelectionDecision d;
  d.rule = SelectionRule::Uniform;
  d.chosen_k = rng.uniform_int(num_oracles) + 1;
  return d;
}

std::vector<OracleScore> oracle_scores(const TabularEstimator& est, int s) {
  std::vector<OracleScore> out;
  for (int k = 1; k <= est.num_oracles(); ++k) {
    const auto q = est.query(k, s);
    out.push_back({q.estimate.value_or(0.0), q.bonus});
  }
  return out;
}

std::vector<OracleScore> oracle_scores(const EnsembleEstimator& est, int s) {
  std::vector<OracleScore> out;
  for (int k = 1; k <= est.num_oracles(); ++k) {
    const auto q = est.query(k, s);
    out.push_back({q.mean, q.spread});
  }
  return out;
}

double exploration_bonus_gamma(const TabularEstimator& est, int k, int s) { return est.query(k, s).bonus; }

double exploration_bonus_gamma(const EnsembleEstimator& est, int k, int s) { return est.query(k, s).spread; }

double uncertainty_threshold(const ThresholdSpec& spec) {
  if (!(spec.alpha > 0.0)) throw std::invalid_argument("threshold alpha must be positive");
  if (!(spec.delta > 0.0 && spec.delta < 1.0)) throw std::invalid_argument("threshold delta must lie in (0,1)");
  if (spec.num_oracles < 1) throw std::invalid_argument("threshold needs K >= 1");
  const double h2 = spec.horizon * spec.horizon;
  double gap_sum = 0.0;
  for (double g : spec.gaps) {
    if (!(g > 0.0)) throw std::invalid_argument("threshold gaps must be positive");
    gap_sum += h2 / (g * g);
  }
  const double K = spec.num_oracles;
  const double denom = K + gap_sum * std::log(K / spec.delta);
  return spec.alpha * std::sqrt(2.0 * h2 * std::log(2.0 / spec.delta) / denom);
}

}  // namespace olab
