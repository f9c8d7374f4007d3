#pragma once

#include <factorstab/data_matrix.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace factorstab {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

/// Comma-separated numeric matrix. With `has_header` the first line is taken
/// as column names. Ragged rows, non-numeric or non-finite cells and empty
/// input raise ParseError with the 1-based line and column.
DataMatrix parse_csv(std::string_view text, bool has_header,
                     const std::string& source = "<csv>");
DataMatrix load_csv(const std::string& path, bool has_header);

void write_csv(std::ostream& out, const DataMatrix& x, bool with_header);
void write_csv(const std::string& path, const DataMatrix& x, bool with_header);

/// Splits CSV text into trimmed fields per non-empty line (no quoting).
std::vector<std::vector<std::string>> read_csv_records(std::string_view text);

/// Each column centred to mean 0 and scaled to unit sample variance (n - 1
/// denominator). Columns with variance <= 1e-12 raise DegenerateColumn.
DataMatrix standardize(const DataMatrix& x);

/// `count` independent without-replacement samples of `n_sub` rows; draw d
/// depends only on (seed, d).
std::vector<DataMatrix> subsample_rows(const DataMatrix& x, Index n_sub,
                                       Index count, std::uint64_t seed);

/// Writes `contents` to `path`, raising IoError with the path on failure.
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace factorstab
