#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace factorstab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// An n x p observation matrix: rows are observations, columns features.
/// Entries are checked finite at construction.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(Matrix values, std::string provenance = {},
                      std::vector<std::string> column_names = {});

  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }
  const Matrix& values() const noexcept { return values_; }

  const std::vector<std::string>& column_names() const noexcept {
    return column_names_;
  }
  const std::string& provenance() const noexcept { return provenance_; }

  /// Rows picked in the given order; metadata is carried over.
  DataMatrix select_rows(const std::vector<Index>& rows) const;
  /// The first `count` columns in file order.
  DataMatrix leading_columns(Index count) const;

 private:
  Matrix values_;
  std::string provenance_;
  std::vector<std::string> column_names_;
};

}  // namespace factorstab
