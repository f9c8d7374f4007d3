#include <factorstab/data_matrix.hpp>
#include <factorstab/error.hpp>

#include <string>
#include <utility>

namespace factorstab {

DataMatrix::DataMatrix(Matrix values, std::string provenance,
                       std::vector<std::string> column_names)
    : values_(std::move(values)),
      provenance_(std::move(provenance)),
      column_names_(std::move(column_names)) {
  if (!values_.allFinite()) {
    throw_invalid("data matrix has non-finite entries");
  }
  if (!column_names_.empty() &&
      static_cast<Index>(column_names_.size()) != values_.cols()) {
    throw_invalid("column name count " + std::to_string(column_names_.size()) +
                  " does not match column count " +
                  std::to_string(values_.cols()));
  }
}

DataMatrix DataMatrix::select_rows(const std::vector<Index>& rows) const {
  Matrix out(static_cast<Index>(rows.size()), cols());
  for (Index i = 0; i < out.rows(); ++i) {
    const Index src = rows[static_cast<std::size_t>(i)];
    if (src < 0 || src >= this->rows()) {
      throw_invalid("row index " + std::to_string(src) + " out of range");
    }
    out.row(i) = values_.row(src);
  }
  return DataMatrix(std::move(out), provenance_, column_names_);
}

DataMatrix DataMatrix::leading_columns(Index count) const {
  if (count < 1 || count > cols()) {
    throw_invalid("requested " + std::to_string(count) +
                  " leading columns of a matrix with " +
                  std::to_string(cols()));
  }
  std::vector<std::string> names;
  if (!column_names_.empty()) {
    names.assign(column_names_.begin(), column_names_.begin() + count);
  }
  return DataMatrix(values_.leftCols(count), provenance_, std::move(names));
}

}  // namespace factorstab
