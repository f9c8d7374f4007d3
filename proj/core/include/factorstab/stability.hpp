#pragma once

#include <factorstab/data_matrix.hpp>
#include <factorstab/rng.hpp>

#include <cstdint>
#include <vector>

namespace factorstab {

/// Two disjoint halves of a random row permutation: the first floor(n/2)
/// permuted rows and the remaining n - floor(n/2).
struct SplitPair {
  DataMatrix first;
  DataMatrix second;
  std::vector<Index> permutation;
  std::uint64_t split_seed = 0;
};

/// Uniform random permutation of 0..n-1 (Fisher-Yates).
std::vector<Index> random_permutation(Index n, Rng& rng);

SplitPair split_rows(const DataMatrix& x, std::uint64_t split_seed);

/// p x k matrix with orthonormal columns (checked to 1e-8).
class SubspaceBasis {
 public:
  explicit SubspaceBasis(Matrix basis);

  Index dim() const noexcept { return basis_.cols(); }
  Index ambient() const noexcept { return basis_.rows(); }
  const Matrix& basis() const noexcept { return basis_; }

  /// Span of the first k columns.
  SubspaceBasis leading(Index k) const;

 private:
  Matrix basis_;
};

/// Top-k eigenvectors of n^{-1} X^T X.
SubspaceBasis leading_subspace(const DataMatrix& x, Index k);

/// max over unit u in U of min over v in V of sin(u, v). Equals 1 when
/// dim U > dim V; otherwise the largest singular value of (I - V V^T) U,
/// i.e. sqrt(1 - s_min^2) with s_min the smallest singular value of U^T V.
double directed_sin_angle(const SubspaceBasis& u, const SubspaceBasis& v);

/// max(directed(U, V), directed(V, U)); the two agree for equal dimensions.
double symmetric_sin_angle(const SubspaceBasis& u, const SubspaceBasis& v);

/// INS(k) for k = 1..kmax averaged over J random splits, plus the per-split
/// sines. Column k-1 of `raw` holds the J sines at k.
struct InstabilityCurve {
  Index kmax = 0;
  Index splits = 0;
  Vector ins;  // length kmax
  Matrix raw;  // splits x kmax

  double at(Index k) const { return ins(k - 1); }
};

/// Seed of split j derived from the curve's master seed.
std::uint64_t split_seed(std::uint64_t master_seed, Index split_index) noexcept;

/// Requires n >= 4, 1 <= kmax <= min(floor(n/2), p) and splits >= 1.
InstabilityCurve ins_curve(const DataMatrix& x, Index kmax, Index splits,
                           std::uint64_t master_seed);

}  // namespace factorstab
