#include <factorstab/config.hpp>
#include <factorstab/dataio.hpp>
#include <factorstab/error.hpp>
#include <factorstab/rng.hpp>
#include <factorstab/stability.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace factorstab {
namespace {

constexpr double kMinVariance = 1e-12;

std::string location(const std::string& source, std::size_t line, std::size_t col) {
  return source + ":" + std::to_string(line) + (col ? ":" + std::to_string(col) : "");
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::vector<std::string>> read_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      fields.push_back(trim(line.substr(pos, comma == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    out.push_back(std::move(fields));
  }
  return out;
}

DataMatrix parse_csv(std::string_view text, bool has_header, const std::string& source) {
  std::vector<std::string> names;
  std::vector<double> cells;
  Index cols = -1;
  Index rows = 0;
  std::size_t line_no = 0;
  bool header_pending = has_header;

  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      fields.push_back(line.substr(
          pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    const auto width = static_cast<Index>(fields.size());
    if (cols >= 0 && width != cols) {
      throw ParseError(line_no, 0,
                       location(source, line_no, 0) + ": ragged row with " +
                           std::to_string(width) + " fields, expected " +
                           std::to_string(cols));
    }
    cols = width;

    if (header_pending) {
      for (auto f : fields) names.push_back(trim(f));
      header_pending = false;
      continue;
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string cell = trim(fields[c]);
      double v = 0.0;
      const char* first = cell.data();
      const char* last = first + cell.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ParseError(line_no, c + 1,
                         location(source, line_no, c + 1) + ": data row " +
                             std::to_string(rows + 1) + ", column " +
                             std::to_string(c + 1) + ": `" + cell +
                             "` is not a finite number");
      }
      cells.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) {
    throw ParseError(line_no, 0, source + ": no data rows");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = cells[static_cast<std::size_t>(i * cols + j)];
    }
  }
  return DataMatrix(std::move(m), source, std::move(names));
}

DataMatrix load_csv(const std::string& path, bool has_header) {
  return parse_csv(read_text_file(path), has_header, path);
}

void write_csv(std::ostream& out, const DataMatrix& x, bool with_header) {
  if (with_header) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (j) out << ',';
      if (!x.column_names().empty()) {
        out << x.column_names()[static_cast<std::size_t>(j)];
      } else {
        out << 'x' << (j + 1);
      }
    }
    out << '\n';
  }
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (j) out << ',';
      out << format_number(x.values()(i, j));
    }
    out << '\n';
  }
}

void write_csv(const std::string& path, const DataMatrix& x, bool with_header) {
  std::ostringstream buf;
  write_csv(buf, x, with_header);
  write_text_file(path, buf.str());
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

DataMatrix standardize(const DataMatrix& x) {
  const Index n = x.rows();
  if (n < 2) throw_invalid("standardize needs at least 2 rows");
  Matrix m = x.values();
  for (Index j = 0; j < m.cols(); ++j) {
    const double mean = m.col(j).mean();
    m.col(j).array() -= mean;
    const double var = m.col(j).squaredNorm() / static_cast<double>(n - 1);
    if (!(var > kMinVariance)) {
      throw DegenerateColumn(static_cast<std::size_t>(j),
                             "column " + std::to_string(j) +
                                 " is (near) constant; sample variance " +
                                 format_number(var));
    }
    m.col(j) /= std::sqrt(var);
    // Second centring pass removes the O(eps) mean left by the first.
    m.col(j).array() -= m.col(j).mean();
  }
  return DataMatrix(std::move(m), x.provenance(), x.column_names());
}

std::vector<DataMatrix> subsample_rows(const DataMatrix& x, Index n_sub, Index count,
                                       std::uint64_t seed) {
  if (n_sub < 1 || n_sub > x.rows()) {
    throw_invalid("cannot sample " + std::to_string(n_sub) + " rows from " +
                  std::to_string(x.rows()));
  }
  if (count < 1) throw_invalid("subsample count must be >= 1");
  std::vector<DataMatrix> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index d = 0; d < count; ++d) {
    Rng rng = Rng::derive(seed, {stream::kSubsample, static_cast<std::uint64_t>(d)});
    std::vector<Index> perm = random_permutation(x.rows(), rng);
    perm.resize(static_cast<std::size_t>(n_sub));
    out.push_back(x.select_rows(perm));
  }
  return out;
}

}  // namespace factorstab
