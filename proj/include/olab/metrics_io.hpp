#pragma once

#include <span>
#include <string>

#include "olab/driver.hpp"

namespace olab {

/// Column names of the metrics CSV, in order.
std::span<const char* const> metrics_columns();

/// CSV text with a header row. Reals use 17 significant digits, +inf is
/// written "inf" and a missing bonus is left empty. Throws if
/// best_return_so_far decreases within a (run_id, seed) series.
std::string format_metrics(std::span<const RoundMetrics> rows);

/// Writes format_metrics(rows) to `path`; throws std::runtime_error on I/O failure.
void write_metrics(const std::string& path, std::span<const RoundMetrics> rows);

/// "%.17g", with "inf", "-inf" and "nan" spelled out.
std::string format_real(double x);

}  // namespace olab
