#include "olab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace olab {

std::vector<RoundMetrics> run_experiment(const RunConfig& cfg) {
  const Environment env = build_environment(cfg.env);
  const OracleSet oracles = build_oracles(env, cfg.oracles);
  DriverConfig driver = cfg.driver;
  driver.gamma_s = resolve_threshold(cfg.threshold, driver.delta, env.mdp.horizon(), oracles.size());

  const std::size_t n = cfg.seeds.size();
  std::vector<std::vector<RoundMetrics>> per_seed(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        per_seed[i] = run_seed(env, oracles, driver, cfg.seeds[i], cfg.rounds, cfg.run_id);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t threads = std::min<std::size_t>(n, cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : hw);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::vector<RoundMetrics> rows;
  for (auto& v : per_seed) rows.insert(rows.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  return rows;
}

}  // namespace olab
