// olab: run experiments, the bandit benchmark, bound calculators and
// exact baseline evaluation from the command line.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "olab/bandit.hpp"
#include "olab/bounds.hpp"
#include "olab/config.hpp"
#include "olab/experiment.hpp"
#include "olab/learner_baselines.hpp"
#include "olab/metrics_io.hpp"
#include "olab/selection.hpp"
#include "olab/testing/oracle_eval.hpp"

namespace {

using namespace olab;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads) {
  RunConfig cfg = load_config(config_path);
  if (threads > 0) cfg.threads = threads;
  const auto rows = run_experiment(cfg);
  std::filesystem::create_directories(out_dir);
  const auto path = (std::filesystem::path(out_dir) / "metrics.csv").string();
  write_metrics(path, rows);
  std::printf("wrote %zu rows to %s\n", rows.size(), path.c_str());
  return 0;
}

int cmd_bandit(const std::string& ks, int H, const std::string& gaps, double delta, long budget, int seeds,
               const std::string& strategy, const std::string& runs_out) {
  std::vector<BanditStrategy> strategies;
  if (strategy == "active" || strategy == "both") strategies.push_back(BanditStrategy::Active);
  if (strategy == "uniform" || strategy == "both") strategies.push_back(BanditStrategy::Uniform);
  if (strategies.empty()) throw std::invalid_argument("--strategy must be active, uniform or both");

  std::ofstream runs;
  if (!runs_out.empty()) {
    runs.open(runs_out);
    if (!runs) throw std::runtime_error(runs_out + ": cannot open for writing");
    runs << "K,strategy,seed,best_arm,identification_round,censored,suboptimal_pulls\n";
  }
  std::printf("K,strategy,median_identification,censored,mean_suboptimal_pulls,t_order_estimate\n");
  for (double kd : parse_list(ks)) {
    BanditConfig cfg;
    cfg.K = static_cast<int>(kd);
    cfg.H = H;
    cfg.gaps = parse_list(gaps);
    cfg.delta = delta;
    cfg.budget = budget;
    cfg.seeds.clear();
    for (int s = 0; s < seeds; ++s) cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    BoundInputs bi;
    bi.K = cfg.K;
    bi.H = H;
    bi.delta = delta;
    bi.gaps = cfg.gaps.size() == 1 ? std::vector<double>(static_cast<std::size_t>(cfg.K - 1), cfg.gaps[0]) : cfg.gaps;
    for (auto st : strategies) {
      cfg.strategy = st;
      const char* name = st == BanditStrategy::Active ? "active" : "uniform";
      const auto result = bandit_bench(cfg);
      const auto sum = summarize(result);
      const double t = st == BanditStrategy::Active ? t_aps(bi) : t_uniform(bi);
      std::printf("%d,%s,%s,%ld,%s,%s\n", cfg.K, name, format_real(sum.median_identification).c_str(), sum.censored,
                  format_real(sum.mean_suboptimal_pulls).c_str(), format_real(t).c_str());
      for (const auto& r : result) {
        if (runs.is_open()) {
          runs << cfg.K << ',' << name << ',' << r.seed << ',' << r.best_arm << ',' << r.identification_round << ','
               << (r.censored ? 1 : 0) << ',' << r.suboptimal_pulls << '\n';
        }
      }
    }
  }
  return 0;
}

int cmd_bounds(int K, double H, const std::string& gaps, double delta, double alpha) {
  BoundInputs in;
  in.K = K;
  in.H = H;
  in.gaps = parse_list(gaps);
  in.delta = delta;
  in.alpha = alpha;
  validate_bound_inputs(in);
  const double gs = uncertainty_threshold({alpha, delta, in.gaps, H, K});
  std::printf("quantity,value,kind\n");
  std::printf("t_aps,%s,order estimate\n", format_real(t_aps(in)).c_str());
  std::printf("t_uniform,%s,order estimate\n", format_real(t_uniform(in)).c_str());
  std::printf("gamma_threshold_bound,%s,order estimate\n", format_real(gamma_threshold_bound(in)).c_str());
  std::printf("uncertainty_threshold,%s,alpha-scaled\n", format_real(gs).c_str());
  return 0;
}

int cmd_eval_baselines(const std::string& config_path) {
  const RunConfig cfg = load_config(config_path);
  const Environment env = build_environment(cfg.env);
  const OracleSet set = build_oracles(env, cfg.oracles);
  const auto& mdp = env.mdp;
  const auto policies = OracleInspector::policies(set);
  const auto values = oracle_true_values(mdp, set);

  std::printf("policy,value_d0\n");
  std::printf("optimal,%s\n", format_real(solve_optimal(mdp).values.initial_value).c_str());
  const int star = best_single_oracle(values);
  std::printf("best_single_oracle(k=%d),%s\n", star, format_real(values[star - 1].initial_value).c_str());
  std::printf("max_following,%s\n",
              format_real(exact_policy_value(mdp, max_following_policy(values, policies)).initial_value).c_str());
  std::printf("max_aggregation,%s\n",
              format_real(exact_policy_value(mdp, max_aggregation_policy(mdp, true_fmax(values))).initial_value).c_str());
  for (int k = 1; k <= set.size(); ++k) {
    std::printf("oracle_%d,%s\n", k, format_real(values[k - 1].initial_value).c_str());
    const auto plus = one_step_improvement(mdp, values[k - 1]);
    std::printf("oracle_%d_improved,%s\n", k, format_real(exact_policy_value(mdp, plus).initial_value).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"olab: active policy improvement from multiple oracles"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  auto* run = app.add_subcommand("run", "run an experiment and write <out>/metrics.csv");
  run->add_option("--config", config_path, "JSON run configuration")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--threads", threads, "worker threads (0 = config or hardware)");

  std::string ks = "4,8,16", gaps = "0.5", strategy = "both", runs_out;
  int bH = 10, seeds = 200;
  double bdelta = 0.1;
  long budget = 5000;
  auto* bandit = app.add_subcommand("bandit", "best-oracle identification benchmark");
  bandit->add_option("--K", ks, "comma-separated oracle counts");
  bandit->add_option("--H", bH, "horizon");
  bandit->add_option("--gaps", gaps, "gap list, or one gap for every suboptimal arm");
  bandit->add_option("--delta", bdelta, "confidence parameter");
  bandit->add_option("--budget", budget, "rounds per seed");
  bandit->add_option("--seeds", seeds, "number of seeds (0..n-1)");
  bandit->add_option("--strategy", strategy, "active, uniform or both");
  bandit->add_option("--runs-out", runs_out, "optional per-seed CSV");

  int K = 1;
  double H = 1.0, delta = 0.1, alpha = 1.0;
  std::string bgaps;
  auto* bounds = app.add_subcommand("bounds", "print bound calculator outputs");
  bounds->add_option("--K", K, "number of oracles")->required();
  bounds->add_option("--H", H, "horizon")->required();
  bounds->add_option("--gaps", bgaps, "comma-separated gaps")->required();
  bounds->add_option("--delta", delta, "confidence parameter")->required();
  bounds->add_option("--alpha", alpha, "threshold scale");

  std::string eval_config;
  auto* eval = app.add_subcommand("eval-baselines", "exact values of the reference policies");
  eval->add_option("--config", eval_config, "JSON run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, threads);
    if (*bandit) return cmd_bandit(ks, bH, gaps, bdelta, budget, seeds, strategy, runs_out);
    if (*bounds) return cmd_bounds(K, H, bgaps, delta, alpha);
    if (*eval) return cmd_eval_baselines(eval_config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
