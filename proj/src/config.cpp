#include "olab/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "olab/selection.hpp"

namespace olab {

namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were read so leftovers can
// be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(full(key) + ": " + msg);
  }

  std::string full(const std::string& key) const {
    if (path_.empty()) return key.empty() ? "<root>" : key;
    return key.empty() ? path_ : path_ + "." + key;
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback, double lo, double hi) {
    const json* v = get(key);
    if (!v) return fallback;
    const double x = as_number(*v, key);
    if (!(x >= lo && x <= hi)) {
      std::ostringstream os;
      os << "must lie in [" << lo << ", " << hi << "], got " << x;
      fail(key, os.str());
    }
    return x;
  }

  double as_number(const json& v, const std::string& key) const {
    if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "+inf")) {
      return std::numeric_limits<double>::infinity();
    }
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  long integer(const std::string& key, long fallback, long lo, long hi) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(key, "expected an integer");
    const long x = v->get<long>();
    if (x < lo || x > hi) fail(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(x));
    return x;
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(key, "expected true or false");
    return v->get<bool>();
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) fail(key, "expected a string");
    return v->get<std::string>();
  }

  std::string required_string(const std::string& key) {
    auto s = string(key);
    if (!s) fail(key, "missing required key");
    return *s;
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : *v) out.push_back(as_number(x, key));
    return out;
  }

  std::optional<ObjectReader> child(const std::string& key) {
    const json* v = get(key);
    if (!v) return std::nullopt;
    return ObjectReader(*v, full(key));
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) fail(key, "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class T>
T pick(ObjectReader& r, const std::string& key, const std::string& value,
       std::initializer_list<std::pair<const char*, T>> options) {
  for (const auto& [name, v] : options) {
    if (value == name) return v;
  }
  std::string names;
  for (const auto& [name, v] : options) names += (names.empty() ? "" : ", ") + std::string(name);
  r.fail(key, "unknown value '" + value + "' (expected one of: " + names + ")");
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<document>: ") + e.what());
  }
  ObjectReader root(doc, "");
  RunConfig cfg;
  DriverConfig& d = cfg.driver;

  if (auto id = root.string("run_id")) cfg.run_id = *id;

  auto env = root.child("env");
  if (!env) root.fail("env", "missing required key");
  cfg.env.name = env->required_string("name");
  pick<int>(*env, "name", cfg.env.name, {{"two_rooms", 0}, {"chain", 1}, {"point_mass", 2}});
  if (env->get("horizon")) cfg.env.horizon = static_cast<int>(env->integer("horizon", 1, 1, 100000));
  cfg.env.slip = env->number("slip", cfg.env.slip, 0.0, 1.0);
  if (env->get("size")) cfg.env.size = static_cast<int>(env->integer("size", 2, 2, 1000));
  env->finish();

  if (auto orc = root.child("oracles")) {
    if (auto kind = orc->string("kind")) {
      cfg.oracles.kind = *kind;
      pick<int>(*orc, "kind", *kind, {{"noise_graded", 0}, {"region_experts", 1}});
    }
    cfg.oracles.noise = orc->numbers("noise", cfg.oracles.noise);
    if (cfg.oracles.noise.empty()) orc->fail("noise", "need at least one oracle");
    for (double n : cfg.oracles.noise) {
      if (!(n >= 0.0 && n <= 1.0)) orc->fail("noise", "every rate must lie in [0, 1]");
    }
    orc->finish();
  }

  d.mode = pick<Mode>(root, "algorithm", root.required_string("algorithm"),
                      {{"maps", Mode::Maps}, {"maps_se", Mode::MapsSe}, {"mamba", Mode::Mamba}, {"rl_only", Mode::RlOnly}});
  if (auto est = root.string("estimator")) {
    d.estimator = pick<EstimatorKind>(root, "estimator", *est,
                                      {{"tabular", EstimatorKind::Tabular}, {"ensemble", EstimatorKind::Ensemble}});
  }
  d.lambda_mix = root.number("lambda_mix", d.lambda_mix, 0.0, 1.0);
  d.lambda_gae = root.number("lambda_gae", d.lambda_gae, 0.0, 1.0);
  d.lambda_est = root.number("lambda_est", d.lambda_est, std::numeric_limits<double>::min(), 1.0);
  d.delta = root.number("delta", d.delta, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));

  if (auto th = root.child("threshold")) {
    if (th->get("gamma_s")) {
      cfg.threshold.gamma_s = th->number("gamma_s", 0.0, 0.0, std::numeric_limits<double>::infinity());
    }
    cfg.threshold.alpha = th->number("alpha", cfg.threshold.alpha, std::numeric_limits<double>::min(),
                                     std::numeric_limits<double>::max());
    cfg.threshold.gaps = th->numbers("gaps", {});
    for (double g : cfg.threshold.gaps) {
      if (!(g > 0.0)) th->fail("gaps", "every gap must be positive");
    }
    th->finish();
  }

  if (auto ens = root.child("ensemble")) {
    d.ensemble.members = static_cast<int>(ens->integer("members", d.ensemble.members, 1, 1000));
    d.ensemble.ridge = ens->number("ridge", d.ensemble.ridge, std::numeric_limits<double>::min(), 1e12);
    d.ensemble.init_scale = ens->number("init_scale", d.ensemble.init_scale, 0.0, 1e12);
    ens->finish();
  }
  if (auto buf = root.child("buffers")) {
    d.oracle_capacity = static_cast<int>(buf->integer("oracle_capacity", d.oracle_capacity, 1, 100000000));
    d.learner_capacity = static_cast<int>(buf->integer("learner_capacity", d.learner_capacity, 1, 100000000));
    buf->finish();
  }
  cfg.rounds = root.integer("rounds", cfg.rounds, 1, 100000000);
  d.step_size = root.number("step_size", d.step_size, 0.0, 1e12);
  if (auto sch = root.string("schedule")) {
    d.schedule = pick<StepSchedule>(root, "schedule", *sch,
                                    {{"constant", StepSchedule::Constant}, {"inv_sqrt", StepSchedule::InvSqrt}});
  }
  if (auto clip = root.child("clip")) {
    d.clip.enabled = clip->boolean("enabled", d.clip.enabled);
    d.clip.epsilon = clip->number("epsilon", d.clip.epsilon, 0.0, 1.0);
    d.clip.epochs = static_cast<int>(clip->integer("epochs", d.clip.epochs, 1, 1000));
    clip->finish();
  }
  if (const json* seeds = root.get("seeds")) {
    if (!seeds->is_array() || seeds->empty()) root.fail("seeds", "expected a nonempty array of integers");
    cfg.seeds.clear();
    for (const auto& s : *seeds) {
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
        root.fail("seeds", "expected non-negative integers");
      }
      cfg.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  d.eval_episodes = static_cast<int>(root.integer("eval_episodes", d.eval_episodes, 0, 100000000));
  cfg.threads = static_cast<int>(root.integer("threads", cfg.threads, 0, 1024));
  root.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Environment build_environment(const EnvConfig& cfg) {
  if (cfg.name == "two_rooms") {
    TwoRoomsParams p;
    p.slip = cfg.slip;
    if (cfg.horizon) p.horizon = *cfg.horizon;
    return make_two_rooms(p);
  }
  if (cfg.name == "chain") {
    ChainParams p;
    p.slip = cfg.slip;
    if (cfg.horizon) p.horizon = *cfg.horizon;
    if (cfg.size) p.length = *cfg.size;
    return make_chain(p);
  }
  if (cfg.name == "point_mass") {
    PointMassParams p;
    p.slip = cfg.slip;
    if (cfg.horizon) p.horizon = *cfg.horizon;
    if (cfg.size) p.grid = *cfg.size;
    return make_point_mass(p);
  }
  throw ConfigError("env.name: unknown environment '" + cfg.name + "'");
}

OracleSet build_oracles(const Environment& env, const OracleConfig& cfg) {
  if (cfg.kind == "noise_graded") return make_noise_graded_oracles(env.mdp, cfg.noise);
  if (cfg.kind == "region_experts") {
    if (static_cast<int>(cfg.noise.size()) != env.num_regions) {
      throw ConfigError("oracles.noise: region experts need one noise rate per region (" +
                        std::to_string(env.num_regions) + ")");
    }
    return make_region_expert_oracles(env.mdp, env.regions, cfg.noise);
  }
  throw ConfigError("oracles.kind: unknown oracle family '" + cfg.kind + "'");
}

double resolve_threshold(const ThresholdConfig& cfg, double delta, int horizon, int num_oracles) {
  if (cfg.gamma_s) return *cfg.gamma_s;
  if (cfg.gaps.empty()) return std::numeric_limits<double>::infinity();
  return uncertainty_threshold({cfg.alpha, delta, cfg.gaps, static_cast<double>(horizon), num_oracles});
}

}  // namespace olab
