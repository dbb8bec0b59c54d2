#include "olab/bandit.hpp"

#include <algorithm>
#include <stdexcept>

#include "olab/mdp.hpp"
#include "olab/rng.hpp"
#include "olab/selection.hpp"
#include "olab/value_estimation.hpp"

namespace olab {

namespace {

std::vector<double> arm_means(const BanditConfig& cfg, int best_pos) {
  if (cfg.values) {
    if (static_cast<int>(cfg.values->size()) != cfg.K) throw std::invalid_argument("bandit: need K arm values");
    return *cfg.values;
  }
  std::vector<double> gaps = cfg.gaps;
  if (gaps.size() == 1) gaps.assign(static_cast<std::size_t>(std::max(cfg.K - 1, 0)), cfg.gaps.front());
  if (static_cast<int>(gaps.size()) != cfg.K - 1) throw std::invalid_argument("bandit: need K-1 gaps");
  const double top = cfg.H / 2.0;
  std::vector<double> v;
  std::size_t g = 0;
  for (int k = 0; k < cfg.K; ++k) {
    if (k == best_pos) {
      v.push_back(top);
      continue;
    }
    const double x = top - gaps[g++];
    if (!(gaps[g - 1] > 0.0) || x < 0.0) throw std::invalid_argument("bandit: gaps must lie in (0, H/2]");
    v.push_back(x);
  }
  return v;
}

}  // namespace

std::vector<BanditRun> bandit_bench(const BanditConfig& cfg) {
  if (cfg.K < 1 || cfg.H < 1 || cfg.budget < 1) throw std::invalid_argument("bandit: bad configuration");
  std::vector<BanditRun> out;
  for (std::uint64_t seed : cfg.seeds) {
    RngStream root(seed);
    RngStream layout = root.split(1);
    RngStream noise = root.split(2);
    RngStream select = root.split(3);
    const int best_pos = (cfg.shuffle_best && !cfg.values) ? layout.uniform_int(cfg.K) : 0;
    const auto means = arm_means(cfg, best_pos);
    for (double m : means) {
      if (m < 0.0 || m > cfg.H) throw std::invalid_argument("bandit: arm means must lie in [0, H]");
    }
    const int best = argmax_first(means);

    std::vector<double> sums(static_cast<std::size_t>(cfg.K), 0.0);
    std::vector<long> counts(static_cast<std::size_t>(cfg.K), 0);
    std::vector<OracleScore> scores(static_cast<std::size_t>(cfg.K));
    std::vector<double> empirical(static_cast<std::size_t>(cfg.K));
    BanditRun run;
    run.seed = seed;
    run.best_arm = best + 1;
    long last_wrong = 0;
    int pulled = 0;
    for (long n = 1; n <= cfg.budget; ++n) {
      int k;
      if (cfg.strategy == BanditStrategy::Active) {
        for (int j = 0; j < cfg.K; ++j) {
          const long c = counts[j];
          scores[j] = {c ? sums[j] / c : 0.0, hoeffding_bonus(c, cfg.H, cfg.delta)};
        }
        k = select_kstar(scores).chosen_k - 1;
      } else {
        k = uniform_select(cfg.K, select).chosen_k - 1;
      }
      const double p = means[k] / cfg.H;
      double ret = 0.0;
      for (int h = 0; h < cfg.H; ++h) ret += noise.uniform() < p ? 1.0 : 0.0;
      if (counts[k] == 0) ++pulled;
      sums[k] += ret;
      counts[k] += 1;
      if (k != best) ++run.suboptimal_pulls;

      bool correct = pulled == cfg.K;
      if (correct) {
        for (int j = 0; j < cfg.K; ++j) empirical[j] = sums[j] / counts[j];
        correct = argmax_first(empirical) == best;
      }
      if (!correct) last_wrong = n;
    }
    run.censored = last_wrong == cfg.budget;
    run.identification_round = last_wrong + 1;
    out.push_back(run);
  }
  return out;
}

BanditSummary summarize(std::span<const BanditRun> runs) {
  if (runs.empty()) throw std::invalid_argument("summarize: no runs");
  std::vector<double> t;
  BanditSummary s;
  double pulls = 0.0;
  for (const auto& r : runs) {
    t.push_back(static_cast<double>(r.identification_round));
    s.censored += r.censored ? 1 : 0;
    pulls += static_cast<double>(r.suboptimal_pulls);
  }
  std::sort(t.begin(), t.end());
  const std::size_t n = t.size();
  s.median_identification = n % 2 ? t[n / 2] : 0.5 * (t[n / 2 - 1] + t[n / 2]);
  s.mean_suboptimal_pulls = pulls / static_cast<double>(n);
  return s;
}

}  // namespace olab
