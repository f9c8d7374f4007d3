#pragma once

#include <factorstab/data_matrix.hpp>

#include <optional>

namespace factorstab {

/// Square, finite, symmetric matrix. Symmetry is checked to 1e-10 relative
/// to the largest entry magnitude.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(Matrix entries);

  Index dim() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }

 private:
  Matrix entries_;
};

/// Leading eigenpairs, eigenvalues descending. Each eigenvector is
/// sign-fixed so that its largest-magnitude entry is positive (first such
/// entry on exact ties).
struct EigenSystem {
  Vector values;
  Matrix vectors;
  // Shape of the data the decomposition came from; (dim, dim) for a bare
  // symmetric matrix.
  Index source_rows = 0;
  Index source_cols = 0;

  Index count() const noexcept { return values.size(); }
};

/// Full (or top-`top`) eigendecomposition of a symmetric matrix.
EigenSystem sym_eig_desc(const SymmetricMatrix& m,
                         std::optional<Index> top = std::nullopt);

/// n^{-1} X^T X, built with a symmetric rank update so it is exactly
/// symmetric.
SymmetricMatrix sample_covariance(const DataMatrix& x);

/// n^{-1} X X^T.
SymmetricMatrix scaled_gram(const DataMatrix& x);

/// Leading `top` eigenpairs of n^{-1} X^T X from the p x p matrix.
EigenSystem cov_eigs_direct(const DataMatrix& x, Index top);

/// Leading `top` eigenpairs of n^{-1} X^T X from the n x n matrix
/// n^{-1} X X^T, with v_j = X^T u_j / sqrt(n lambda_j). Throws RankDeficient
/// when a requested eigenvalue is numerically zero.
EigenSystem cov_eigs_gram(const DataMatrix& x, Index top);

/// True when the Gram route is the cheaper one (p > n).
bool prefers_gram(Index rows, Index cols) noexcept;

/// Picks the Gram or direct route; a rank-deficient Gram attempt falls back
/// to the direct solve.
EigenSystem cov_eigs(const DataMatrix& x, Index top);

/// Singular values, descending, length min(rows, cols).
Vector singular_values(const Matrix& a);

/// sum_j sigma_j^2 over all eigenvalues of n^{-1} X^T X, computed as a
/// squared Frobenius norm of the smaller of the two Gram matrices.
double sum_sq_eigenvalues(const DataMatrix& x);

/// Eigenvalues of n^{-1} X^T X needed by the selection criteria: the leading
/// few plus the total sum of squares, so any tail sum is available.
struct SampleSpectrum {
  Vector leading;          // descending, clamped to >= 0
  double total_sq = 0.0;   // sum over all p eigenvalues of sigma_j^2
  Index rows = 0;
  Index cols = 0;

  /// sum_{j > k} sigma_j^2, for 0 <= k <= leading.size(). Clamped at 0.
  double tail_sq(Index k) const;
};

/// Eigenvalues only (no vectors), solved on the smaller Gram matrix.
SampleSpectrum sample_spectrum(const DataMatrix& x, Index count);

}  // namespace factorstab
