#pragma once

#include <string>
#include <vector>

#include "sunlit/evaluation.hpp"
#include "sunlit/illumination.hpp"

namespace sunlit {

/// Published final-model results for the full-scale run (10 seeds x 1e7
/// steps, 100 evaluation episodes per seed).
struct ReferenceTarget {
  IlluminationMode mode = IlluminationMode::Binary;
  double inspected_pct = 0.0;
  double inspected_ci_low = 0.0;
  double inspected_ci_high = 0.0;
  double delta_v = 0.0;         // m/s
  double episode_length = 0.0;  // s
};

ReferenceTarget reference_target(IlluminationMode mode);

struct ReferenceTolerance {
  double inspected_pp = 2.0;        // absolute, percentage points
  double delta_v_relative = 0.30;   // fraction of the reference value
};

struct ComparisonRow {
  std::string metric;
  MetricSummary measured;
  double reference = 0.0;
  std::string tolerance;  // empty when the metric is informational only
  bool checked = false;
  bool within = true;
};

struct Comparison {
  IlluminationMode mode = IlluminationMode::Binary;
  std::vector<ComparisonRow> rows;
  bool within_tolerance() const;
};

Comparison compare_to_reference(const EvalReport& report, IlluminationMode mode,
                                const ReferenceTolerance& tolerance = {});
/// Markdown table.
std::string comparison_table(const Comparison& comparison);

}  // namespace sunlit
