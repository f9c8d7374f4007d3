#include <factorstab/dataio.hpp>
#include <factorstab/error.hpp>
#include <factorstab/reports.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <limits>
#include <map>
#include <sstream>

namespace factorstab {
namespace {

constexpr double kPanelWidth = 360.0;
constexpr double kPanelHeight = 260.0;
constexpr double kMarginLeft = 52.0;
constexpr double kMarginRight = 96.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 42.0;
constexpr double kTitleHeight = 34.0;

constexpr const char* kPalette[] = {"#d62728", "#9467bd", "#8c564b", "#2ca02c",
                                    "#1f77b4", "#ff7f0e", "#17becf", "#7f7f7f"};

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 1) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, ptr);
}

// Groups completed cells by (scenario, regime) in plan order.
struct Facet {
  std::string title;
  std::vector<const CellResult*> cells;
};

std::vector<Facet> facets(const ExperimentResult& result) {
  std::vector<Facet> out;
  for (const CellResult& cell : result.cells) {
    if (!cell.completed) continue;
    std::string title = std::string(to_string(cell.spec.scenario)) + "(" +
                        std::string(to_string(cell.spec.regime)) + ")";
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Facet& f) { return f.title == title; });
    if (it == out.end()) {
      out.push_back(Facet{title, {}});
      it = out.end() - 1;
    }
    it->cells.push_back(&cell);
  }
  return out;
}

std::string cell_prefix(const CellSpec& s) {
  std::ostringstream out;
  out << s.label() << ',' << to_string(s.scenario) << ',' << to_string(s.regime) << ','
      << s.n << ',' << s.p;
  return out.str();
}

Index to_index(const std::string& field, std::size_t line, std::size_t col) {
  Index v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, col, "selection.csv:" + std::to_string(line) + ":" +
                                    std::to_string(col) + ": expected an integer, got `" +
                                    field + "`");
  }
  return v;
}

double to_double(const std::string& field, std::size_t line, std::size_t col) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line, col, "selection.csv:" + std::to_string(line) + ":" +
                                    std::to_string(col) + ": expected a number, got `" +
                                    field + "`");
  }
  return v;
}

}  // namespace

std::string selection_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "cell,scenario,regime,n,p,K,criterion";
  for (Index k = 1; k <= result.plan.kmax; ++k) out << ",k" << k;
  out << ",pct_correct\n";
  for (const CellResult& cell : result.cells) {
    if (!cell.completed) continue;
    for (const CriterionTally& t : cell.tallies) {
      out << cell_prefix(cell.spec) << ',' << cell.spec.K << ',' << to_string(t.criterion);
      for (Index c : t.counts) out << ',' << c;
      out << ',' << format_number(t.pct_correct) << '\n';
    }
  }
  return out.str();
}

std::string instability_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "cell,scenario,regime,n,p,k,mean_ins\n";
  for (const CellResult& cell : result.cells) {
    if (!cell.completed) continue;
    for (Index k = 1; k <= cell.mean_ins.size(); ++k) {
      out << cell_prefix(cell.spec) << ',' << k << ',' << format_number(cell.mean_ins(k - 1))
          << '\n';
    }
  }
  return out.str();
}

std::string failures_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "cell,replication,error,message\n";
  for (const CellResult& cell : result.cells) {
    if (cell.completed) continue;
    std::string message = cell.failure;
    std::replace(message.begin(), message.end(), ',', ';');
    std::replace(message.begin(), message.end(), '\n', ' ');
    out << cell.spec.label() << ',' << cell.failed_rep.value_or(-1) << ','
        << (cell.failure_code ? to_string(*cell.failure_code) : "") << ',' << message << '\n';
  }
  return out.str();
}

std::string render_svg(const std::string& title, const std::vector<ChartPanel>& panels,
                       std::size_t columns) {
  columns = std::max<std::size_t>(1, std::min(columns, std::max<std::size_t>(1, panels.size())));
  const std::size_t rows = panels.empty() ? 0 : (panels.size() + columns - 1) / columns;
  const double width = kPanelWidth * static_cast<double>(columns);
  const double height = kTitleHeight + kPanelHeight * static_cast<double>(rows);

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0)
      << "\" height=\"" << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << ' '
      << fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << fixed(width / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";

  for (std::size_t i = 0; i < panels.size(); ++i) {
    const ChartPanel& panel = panels[i];
    const double ox = kPanelWidth * static_cast<double>(i % columns);
    const double oy = kTitleHeight + kPanelHeight * static_cast<double>(i / columns);
    const double plot_w = kPanelWidth - kMarginLeft - kMarginRight;
    const double plot_h = kPanelHeight - kMarginTop - kMarginBottom;

    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    for (const auto& s : panel.series) {
      for (const auto& [x, y] : s.points) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
      }
    }
    if (!(x_min <= x_max)) {
      x_min = 0.0;
      x_max = 1.0;
    }
    if (x_min == x_max) {
      x_min -= 1.0;
      x_max += 1.0;
    }
    const double y_span = panel.y_max > panel.y_min ? panel.y_max - panel.y_min : 1.0;
    auto px = [&](double x) { return ox + kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) {
      const double c = std::clamp(y, panel.y_min, panel.y_min + y_span);
      return oy + kMarginTop + plot_h - (c - panel.y_min) / y_span * plot_h;
    };

    svg << "<g class=\"panel\">\n"
        << "<text x=\"" << fixed(ox + kMarginLeft + plot_w / 2) << "\" y=\""
        << fixed(oy + kMarginTop - 10) << "\" text-anchor=\"middle\" font-size=\"12\">"
        << xml_escape(panel.title) << "</text>\n"
        << "<rect x=\"" << fixed(ox + kMarginLeft) << "\" y=\"" << fixed(oy + kMarginTop)
        << "\" width=\"" << fixed(plot_w) << "\" height=\"" << fixed(plot_h)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double y = panel.y_min + y_span * t / 4.0;
      svg << "<text x=\"" << fixed(ox + kMarginLeft - 4) << "\" y=\"" << fixed(py(y) + 4)
          << "\" text-anchor=\"end\">" << fixed(y, y_span >= 10 ? 0 : 2) << "</text>\n";
    }
    svg << "<text x=\"" << fixed(ox + kMarginLeft) << "\" y=\""
        << fixed(oy + kMarginTop + plot_h + 14) << "\">" << fixed(x_min, 0) << "</text>\n"
        << "<text x=\"" << fixed(ox + kMarginLeft + plot_w) << "\" y=\""
        << fixed(oy + kMarginTop + plot_h + 14) << "\" text-anchor=\"end\">" << fixed(x_max, 0)
        << "</text>\n"
        << "<text x=\"" << fixed(ox + kMarginLeft + plot_w / 2) << "\" y=\""
        << fixed(oy + kMarginTop + plot_h + 30) << "\" text-anchor=\"middle\">"
        << xml_escape(panel.x_label) << "</text>\n"
        << "<text x=\"" << fixed(ox + 12) << "\" y=\"" << fixed(oy + kMarginTop + plot_h / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << fixed(ox + 12) << ' '
        << fixed(oy + kMarginTop + plot_h / 2) << ")\">" << xml_escape(panel.y_label)
        << "</text>\n";

    for (std::size_t s = 0; s < panel.series.size(); ++s) {
      const ChartSeries& series = panel.series[s];
      const char* color = kPalette[s % std::size(kPalette)];
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
      for (std::size_t j = 0; j < series.points.size(); ++j) {
        svg << (j ? " " : "") << fixed(px(series.points[j].first), 2) << ','
            << fixed(py(series.points[j].second), 2);
      }
      svg << "\"/>\n";
      const double ly = oy + kMarginTop + 12 + 14 * static_cast<double>(s);
      const double lx = ox + kMarginLeft + plot_w + 8;
      svg << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly - 4) << "\" x2=\""
          << fixed(lx + 14) << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n"
          << "<text x=\"" << fixed(lx + 18) << "\" y=\"" << fixed(ly) << "\">"
          << xml_escape(series.name) << "</text>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string selection_svg(const ExperimentResult& result) {
  std::vector<ChartPanel> panels;
  for (const Facet& f : facets(result)) {
    ChartPanel panel;
    panel.title = f.title;
    panel.x_label = "p";
    panel.y_label = "correct selection (%)";
    panel.y_min = 0.0;
    panel.y_max = 100.0;
    for (std::size_t c = 0; c < result.plan.criteria.size(); ++c) {
      ChartSeries series;
      series.name = std::string(to_string(result.plan.criteria[c]));
      for (const CellResult* cell : f.cells) {
        series.points.emplace_back(static_cast<double>(cell->spec.p),
                                   cell->tallies[c].pct_correct);
      }
      panel.series.push_back(std::move(series));
    }
    panels.push_back(std::move(panel));
  }
  return render_svg("Correct selection percentage vs p", panels,
                    std::max<std::size_t>(1, result.plan.regimes.size()));
}

std::string instability_svg(const ExperimentResult& result) {
  std::vector<ChartPanel> panels;
  for (const Facet& f : facets(result)) {
    ChartPanel panel;
    panel.title = f.title;
    panel.x_label = "k";
    panel.y_label = "mean INS(k)";
    for (const CellResult* cell : f.cells) {
      ChartSeries series;
      series.name = "p=" + std::to_string(cell->spec.p);
      for (Index k = 1; k <= cell->mean_ins.size(); ++k) {
        series.points.emplace_back(static_cast<double>(k), cell->mean_ins(k - 1));
      }
      panel.series.push_back(std::move(series));
    }
    panels.push_back(std::move(panel));
  }
  return render_svg("Loading instability vs k", panels,
                    std::max<std::size_t>(1, result.plan.regimes.size()));
}

std::vector<std::string> emit_reports(const ExperimentResult& result,
                                      const std::string& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) {
    throw Error(ErrorCode::IoError, "cannot create directory " + outdir + ": " + ec.message());
  }
  const std::filesystem::path dir(outdir);
  std::vector<std::pair<std::string, std::string>> files{
      {"selection.csv", selection_csv(result)},
      {"instability.csv", instability_csv(result)},
      {"selection.svg", selection_svg(result)},
      {"instability.svg", instability_svg(result)},
  };
  if (!result.all_completed()) files.emplace_back("failures.csv", failures_csv(result));
  std::vector<std::string> written;
  for (const auto& [name, body] : files) {
    const std::string path = (dir / name).string();
    write_text_file(path, body);
    written.push_back(path);
  }
  return written;
}

std::vector<SelectionRow> parse_selection_csv(std::string_view text) {
  const auto records = read_csv_records(text);
  if (records.empty()) throw ParseError(1, 0, "selection.csv: missing header");
  const auto& header = records.front();
  constexpr std::size_t kFixed = 7;
  if (header.size() < kFixed + 2 || header[0] != "cell" || header.back() != "pct_correct") {
    throw ParseError(1, 0, "selection.csv: unexpected header");
  }
  const std::size_t kmax = header.size() - kFixed - 1;
  std::vector<SelectionRow> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r];
    const std::size_t line = r + 1;
    if (f.size() != header.size()) {
      throw ParseError(line, 0, "selection.csv:" + std::to_string(line) + ": expected " +
                                    std::to_string(header.size()) + " fields");
    }
    SelectionRow row;
    row.cell = f[0];
    row.scenario = f[1];
    row.regime = f[2];
    row.n = to_index(f[3], line, 4);
    row.p = to_index(f[4], line, 5);
    row.K = to_index(f[5], line, 6);
    row.criterion = f[6];
    for (std::size_t k = 0; k < kmax; ++k) {
      row.counts.push_back(to_index(f[kFixed + k], line, kFixed + k + 1));
    }
    row.pct_correct = to_double(f.back(), line, f.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace factorstab
