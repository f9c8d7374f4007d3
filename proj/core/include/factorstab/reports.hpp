#pragma once

#include <factorstab/mcharness.hpp>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace factorstab {

// selection.csv:   cell,scenario,regime,n,p,K,criterion,k1..kKmax,pct_correct
// instability.csv: cell,scenario,regime,n,p,k,mean_ins
// failures.csv:    cell,replication,error,message (only when a cell aborted)
std::string selection_csv(const ExperimentResult& result);
std::string instability_csv(const ExperimentResult& result);
std::string failures_csv(const ExperimentResult& result);

/// Correct-selection percentage against p, one panel per (scenario, regime)
/// and one polyline per criterion.
std::string selection_svg(const ExperimentResult& result);
/// Mean INS(k) against k, one panel per (scenario, regime) and one polyline
/// per p.
std::string instability_svg(const ExperimentResult& result);

/// Writes the CSVs and SVGs into `outdir` (created if missing) and returns
/// the paths written.
std::vector<std::string> emit_reports(const ExperimentResult& result,
                                      const std::string& outdir);

struct SelectionRow {
  std::string cell;
  std::string scenario;
  std::string regime;
  Index n = 0;
  Index p = 0;
  Index K = 0;
  std::string criterion;
  std::vector<Index> counts;
  double pct_correct = 0.0;
};

/// Parses selection.csv back; ParseError on malformed content.
std::vector<SelectionRow> parse_selection_csv(std::string_view text);

/// Minimal line chart renderer shared by the report figures.
struct ChartSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct ChartPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  double y_min = 0.0;
  double y_max = 1.0;
  std::vector<ChartSeries> series;
};

std::string render_svg(const std::string& title, const std::vector<ChartPanel>& panels,
                       std::size_t columns);

}  // namespace factorstab
