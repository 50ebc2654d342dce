#pragma once

#include <filesystem>
#include <string>

#include "tampa/engine.hpp"

namespace tampa {

// Writes via a temp file in the same directory plus an atomic rename, so a
// failed run never leaves a partial output behind.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// CSV with one row per decision epoch; the resolved config and seed ride
// along as leading comment lines.
std::string trajectory_csv(const RunResult& result, const std::string& resolved_config);

// Per-run metrics document: utilities, triggers, visit shares, detector log,
// and the final per-edge estimator state (31-mass arrays).
std::string metrics_json(const RunResult& result, const std::string& resolved_config);

std::string comparison_json(const ComparisonReport& report, const std::string& resolved_config);

// Per-minute cumulative utility of one strategy: a column per seed plus the
// mean.
std::string series_csv(const StrategySummary& summary,
                       const std::vector<std::uint64_t>& seeds,
                       const std::string& resolved_config);

}  // namespace tampa
