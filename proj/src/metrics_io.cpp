#include "olab/metrics_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <utility>

namespace olab {

namespace {

constexpr const char* kColumns[] = {
    "run_id",          "seed",           "round",        "env_steps_total",     "oracle_calls_total",
    "selected_oracle", "switch_time",    "switch_state", "bonus_at_switch",     "learner_return_eval",
    "best_return_so_far", "selection_counts", "undefined_fmax_steps",
};

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::span<const char* const> metrics_columns() { return kColumns; }

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_metrics(std::span<const RoundMetrics> rows) {
  std::string out;
  for (std::size_t i = 0; i < std::size(kColumns); ++i) {
    if (i) out += ',';
    out += kColumns[i];
  }
  out += '\n';
  std::map<std::pair<std::string, std::uint64_t>, double> best;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.run_id, r.seed);
    const auto it = best.find(key);
    if (it != best.end() && r.best_return_so_far < it->second) {
      throw std::logic_error("best_return_so_far decreased at round " + std::to_string(r.round) + " of seed " +
                             std::to_string(r.seed));
    }
    best[key] = r.best_return_so_far;

    std::string counts;
    for (std::size_t k = 0; k < r.selection_counts.size(); ++k) {
      if (k) counts += ';';
      counts += std::to_string(r.selection_counts[k]);
    }
    out += quote(r.run_id);
    out += ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.round);
    out += ',' + std::to_string(r.env_steps_total);
    out += ',' + std::to_string(r.oracle_calls_total);
    out += ',' + std::to_string(r.selected_oracle);
    out += ',' + std::to_string(r.switch_time);
    out += ',' + std::to_string(r.switch_state);
    out += ',' + (std::isnan(r.bonus_at_switch) ? std::string() : format_real(r.bonus_at_switch));
    out += ',' + format_real(r.learner_return_eval);
    out += ',' + format_real(r.best_return_so_far);
    out += ',' + counts;
    out += ',' + std::to_string(r.undefined_fmax_steps);
    out += '\n';
  }
  return out;
}

void write_metrics(const std::string& path, std::span<const RoundMetrics> rows) {
  const std::string text = format_metrics(rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace olab
