#include "sunlit/reference.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace sunlit {

ReferenceTarget reference_target(IlluminationMode mode) {
  if (mode == IlluminationMode::Spectral) {
    return {mode, 98.82, 98.45, 99.13, 16.25, 3181.0};
  }
  return {mode, 99.83, 99.74, 99.91, 18.08, 3217.0};
}

bool Comparison::within_tolerance() const {
  for (const auto& row : rows) {
    if (row.checked && !row.within) return false;
  }
  return true;
}

Comparison compare_to_reference(const EvalReport& report, IlluminationMode mode,
                                const ReferenceTolerance& tolerance) {
  const ReferenceTarget target = reference_target(mode);
  Comparison c;
  c.mode = mode;

  ComparisonRow inspected{"inspected_pct", report.inspected_pct,
                          target.inspected_pct, "", true, true};
  {
    std::ostringstream t;
    t << "+/- " << tolerance.inspected_pp << " pp";
    inspected.tolerance = t.str();
  }
  inspected.within = std::abs(report.inspected_pct.iqm - target.inspected_pct) <=
                     tolerance.inspected_pp;
  c.rows.push_back(inspected);

  ComparisonRow dv{"delta_v", report.delta_v, target.delta_v, "", true, true};
  {
    std::ostringstream t;
    t << "+/- " << tolerance.delta_v_relative * 100.0 << "%";
    dv.tolerance = t.str();
  }
  dv.within = std::abs(report.delta_v.iqm - target.delta_v) <=
              tolerance.delta_v_relative * target.delta_v;
  c.rows.push_back(dv);

  c.rows.push_back({"episode_length", report.episode_length,
                    target.episode_length, "", false, true});
  return c;
}

std::string comparison_table(const Comparison& c) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "Reference comparison (" << to_string(c.mode) << " illumination)\n\n";
  out << "| metric | measured IQM | 95% CI | reference | tolerance | status |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto& row : c.rows) {
    out << "| " << row.metric << " | " << row.measured.iqm << " | ["
        << row.measured.ci.low << ", " << row.measured.ci.high << "] | "
        << row.reference << " | " << (row.checked ? row.tolerance : "n/a")
        << " | " << (!row.checked ? "info" : row.within ? "within" : "outside")
        << " |\n";
  }
  out << "\nOverall: "
      << (c.within_tolerance() ? "within tolerance" : "outside tolerance") << "\n";
  return out.str();
}

}  // namespace sunlit
