#include <factorstab/error.hpp>
#include <factorstab/numkernel.hpp>
#include <factorstab/stability.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace factorstab {
namespace {

constexpr double kOrthoTol = 1e-8;

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

// Largest sine between span(u) and span(v) for orthonormal u, v with
// u.cols() <= v.cols(). The residual form keeps full relative accuracy for
// nearly identical subspaces, where 1 - s_min^2 would cancel.
double largest_sine(const Matrix& u, const Matrix& v) {
  const Matrix residual = u - v * (v.transpose() * u);
  const Vector s = singular_values(residual);
  return clamp_unit(s.size() ? s(0) : 0.0);
}

}  // namespace

std::vector<Index> random_permutation(Index n, Rng& rng) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

SplitPair split_rows(const DataMatrix& x, std::uint64_t seed) {
  const Index n = x.rows();
  if (n < 4) {
    throw_invalid("split_rows needs at least 4 rows, got " + std::to_string(n));
  }
  Rng rng(seed);
  SplitPair out;
  out.permutation = random_permutation(n, rng);
  out.split_seed = seed;
  const auto n1 = static_cast<std::ptrdiff_t>(n / 2);
  const std::vector<Index> head(out.permutation.begin(), out.permutation.begin() + n1);
  const std::vector<Index> tail(out.permutation.begin() + n1, out.permutation.end());
  out.first = x.select_rows(head);
  out.second = x.select_rows(tail);
  return out;
}

SubspaceBasis::SubspaceBasis(Matrix basis) : basis_(std::move(basis)) {
  const Index k = basis_.cols();
  if (k < 1 || k > basis_.rows()) {
    throw_invalid("subspace basis must have 1 <= k <= p, got k=" +
                  std::to_string(k) + ", p=" + std::to_string(basis_.rows()));
  }
  if (!basis_.allFinite()) throw_invalid("subspace basis has non-finite entries");
  const double err =
      (basis_.transpose() * basis_ - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (err > kOrthoTol) {
    throw_invalid("subspace basis columns are not orthonormal (error " +
                  std::to_string(err) + ")");
  }
}

SubspaceBasis SubspaceBasis::leading(Index k) const {
  if (k < 1 || k > dim()) {
    throw_invalid("leading(" + std::to_string(k) + ") of a " +
                  std::to_string(dim()) + "-dim subspace");
  }
  return SubspaceBasis(basis_.leftCols(k));
}

SubspaceBasis leading_subspace(const DataMatrix& x, Index k) {
  if (k < 1 || k > std::min(x.rows(), x.cols())) {
    throw_invalid("leading_subspace: k=" + std::to_string(k) +
                  " outside 1..min(n, p)=" +
                  std::to_string(std::min(x.rows(), x.cols())));
  }
  return SubspaceBasis(cov_eigs(x, k).vectors);
}

double directed_sin_angle(const SubspaceBasis& u, const SubspaceBasis& v) {
  if (u.ambient() != v.ambient()) {
    throw_invalid("principal angle between subspaces of R^" +
                  std::to_string(u.ambient()) + " and R^" +
                  std::to_string(v.ambient()));
  }
  if (u.dim() > v.dim()) return 1.0;
  return largest_sine(u.basis(), v.basis());
}

double symmetric_sin_angle(const SubspaceBasis& u, const SubspaceBasis& v) {
  return std::max(directed_sin_angle(u, v), directed_sin_angle(v, u));
}

std::uint64_t split_seed(std::uint64_t master_seed, Index split_index) noexcept {
  return derive_seed(master_seed,
                     {stream::kSplits, static_cast<std::uint64_t>(split_index)});
}

InstabilityCurve ins_curve(const DataMatrix& x, Index kmax, Index splits,
                           std::uint64_t master_seed) {
  const Index n = x.rows();
  if (n < 4) throw_invalid("ins_curve needs at least 4 rows, got " + std::to_string(n));
  if (splits < 1) throw_invalid("ins_curve needs at least one split");
  const Index limit = std::min(n / 2, x.cols());
  if (kmax < 1 || kmax > limit) {
    throw_invalid("Kmax=" + std::to_string(kmax) + " outside 1..min(floor(n/2), p)=" +
                  std::to_string(limit));
  }

  InstabilityCurve curve;
  curve.kmax = kmax;
  curve.splits = splits;
  curve.raw.resize(splits, kmax);
  for (Index j = 0; j < splits; ++j) {
    const SplitPair halves = split_rows(x, split_seed(master_seed, j));
    const Matrix u = cov_eigs(halves.first, kmax).vectors;
    const Matrix v = cov_eigs(halves.second, kmax).vectors;
    for (Index k = 1; k <= kmax; ++k) {
      curve.raw(j, k - 1) = largest_sine(u.leftCols(k), v.leftCols(k));
    }
  }
  curve.ins = curve.raw.colwise().mean().transpose();
  return curve;
}

}  // namespace factorstab
