#include "sunlit/curves.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "sunlit/error.hpp"

namespace sunlit {

namespace {

constexpr const char* kCurveHeader =
    "timestep,iteration,inspected_pct,delta_v,episode_length,total_reward,dv_weight";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << kCurveHeader << "\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : curve) {
    out << p.timestep << ',' << p.iteration << ',' << p.inspected_pct << ','
        << p.delta_v << ',' << p.episode_length << ',' << p.total_reward << ','
        << p.dv_weight << "\n";
  }
}

std::vector<CurvePoint> read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read curve file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kCurveHeader) {
    throw Error(ErrorKind::Io, path.string() + ": unexpected curve header");
  }
  std::vector<CurvePoint> curve;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    try {
      if (cells.size() != 7) throw std::invalid_argument("column count");
      CurvePoint p;
      p.timestep = std::stol(cells[0]);
      p.iteration = std::stoi(cells[1]);
      p.inspected_pct = std::stod(cells[2]);
      p.delta_v = std::stod(cells[3]);
      p.episode_length = std::stod(cells[4]);
      p.total_reward = std::stod(cells[5]);
      p.dv_weight = std::stod(cells[6]);
      curve.push_back(p);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Io, path.string() + ": malformed row at line " +
                                     std::to_string(lineno));
    }
  }
  return curve;
}

double curve_metric(const CurvePoint& p, std::size_t metric) {
  switch (metric) {
    case 0: return p.inspected_pct;
    case 1: return p.delta_v;
    case 2: return p.episode_length;
    case 3: return p.total_reward;
  }
  throw Error(ErrorKind::Evaluation, "unknown curve metric index");
}

std::vector<MetricTable> aggregate_curves(
    const std::map<std::uint64_t, std::vector<CurvePoint>>& curves,
    const BootstrapConfig& bootstrap) {
  if (curves.empty()) throw Error(ErrorKind::Evaluation, "no curves to aggregate");
  const auto& reference = curves.begin()->second;
  for (const auto& [seed, curve] : curves) {
    bool same = curve.size() == reference.size();
    for (std::size_t i = 0; same && i < curve.size(); ++i) {
      same = curve[i].timestep == reference[i].timestep;
    }
    if (!same) {
      throw Error(ErrorKind::Evaluation,
                  "curve for seed " + std::to_string(seed) +
                      " does not share the timestep grid of seed " +
                      std::to_string(curves.begin()->first));
    }
  }

  std::vector<MetricTable> tables;
  for (std::size_t m = 0; m < 4; ++m) {
    MetricTable table;
    table.metric = kCurveMetrics[m];
    for (const auto& entry : curves) table.seeds.push_back(entry.first);
    for (std::size_t i = 0; i < reference.size(); ++i) {
      std::vector<double> values;
      for (const auto& entry : curves) values.push_back(curve_metric(entry.second[i], m));
      const MetricSummary s = summarize(values, bootstrap);
      table.rows.push_back({reference[i].timestep, s.iqm, s.ci.low, s.ci.high});
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

void write_metric_table(std::ostream& out, const MetricTable& table) {
  out << "# metric: " << table.metric << "\n";
  out << "# seeds:";
  for (std::size_t i = 0; i < table.seeds.size(); ++i) {
    out << (i == 0 ? " " : ",") << table.seeds[i];
  }
  out << "\n# aggregate: interquartile mean across seeds, 95% percentile bootstrap CI\n";
  if (table.seeds.size() == 1) {
    out << "# single seed: ci_low and ci_high equal the iqm (no spread to estimate)\n";
  }
  out << "timestep,iqm,ci_low,ci_high\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : table.rows) {
    out << row.timestep << ',' << row.iqm << ',' << row.ci_low << ',' << row.ci_high
        << "\n";
  }
}

}  // namespace sunlit
