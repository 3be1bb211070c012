#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "sunlit/evaluation.hpp"
#include "sunlit/train.hpp"

namespace sunlit {

/// Columns: timestep,iteration,inspected_pct,delta_v,episode_length,
/// total_reward,dv_weight. Doubles round-trip exactly.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);
std::vector<CurvePoint> read_curve_csv(const std::filesystem::path& path);

inline constexpr const char* kCurveMetrics[4] = {"inspected_pct", "delta_v",
                                                 "episode_length", "total_reward"};
double curve_metric(const CurvePoint& p, std::size_t metric);

struct MetricTableRow {
  long timestep = 0;
  double iqm = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct MetricTable {
  std::string metric;
  std::vector<std::uint64_t> seeds;
  std::vector<MetricTableRow> rows;
};

/// IQM and bootstrap CI across seeds at every evaluation timestep. All curves
/// must share one timestep grid. With a single seed the CI collapses to the
/// IQM.
std::vector<MetricTable> aggregate_curves(
    const std::map<std::uint64_t, std::vector<CurvePoint>>& curves,
    const BootstrapConfig& bootstrap = {});

void write_metric_table(std::ostream& out, const MetricTable& table);

}  // namespace sunlit
