#include <factorstab/error.hpp>
#include <factorstab/numkernel.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace factorstab {
namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kPsdTol = 1e-8;
constexpr double kNullEigenvalue = 1e-12;

void fix_signs(Matrix& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < vectors.rows(); ++i) {
      const double mag = std::abs(vectors(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (vectors(arg, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

// Eigen returns ascending order; reverse the requested leading block.
EigenSystem descending(const Vector& ascending_values,
                       const Matrix& ascending_vectors, Index top) {
  const Index dim = ascending_values.size();
  EigenSystem out;
  out.values.resize(top);
  out.vectors.resize(ascending_vectors.rows(), top);
  for (Index j = 0; j < top; ++j) {
    out.values(j) = ascending_values(dim - 1 - j);
    out.vectors.col(j) = ascending_vectors.col(dim - 1 - j);
  }
  fix_signs(out.vectors);
  return out;
}

[[noreturn]] void throw_no_convergence(Index dim) {
  throw Error(ErrorCode::NumericalFailure,
              "symmetric eigensolver did not converge for dimension " +
                  std::to_string(dim) + " (limit " +
                  std::to_string(30 * dim) + " QR iterations)");
}

// Covariance eigenvalues are PSD up to round-off; clamp the round-off.
void clamp_psd(Vector& values) {
  const double scale = std::max(1.0, values.size() ? values.maxCoeff() : 0.0);
  for (Index j = 0; j < values.size(); ++j) {
    if (values(j) < 0.0) {
      if (values(j) < -kPsdTol * scale) {
        throw Error(ErrorCode::NumericalFailure,
                    "covariance eigenvalue " + std::to_string(values(j)) +
                        " is negative beyond round-off");
      }
      values(j) = 0.0;
    }
  }
}

void check_top(Index top, Index limit, const char* what) {
  if (top < 1 || top > limit) {
    throw_invalid(std::string(what) + ": requested " + std::to_string(top) +
                  " eigenpairs, available " + std::to_string(limit));
  }
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw_invalid("symmetric matrix must be square with dim >= 1, got " +
                  std::to_string(entries_.rows()) + "x" +
                  std::to_string(entries_.cols()));
  }
  if (!entries_.allFinite()) {
    throw_invalid("symmetric matrix has non-finite entries");
  }
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    throw_invalid("matrix is not symmetric (max asymmetry " +
                  std::to_string(asym) + ")");
  }
}

EigenSystem sym_eig_desc(const SymmetricMatrix& m, std::optional<Index> top) {
  const Index dim = m.dim();
  const Index count = top.value_or(dim);
  check_top(count, dim, "sym_eig_desc");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.entries());
  if (solver.info() != Eigen::Success) throw_no_convergence(dim);
  EigenSystem out = descending(solver.eigenvalues(), solver.eigenvectors(), count);
  out.source_rows = dim;
  out.source_cols = dim;
  return out;
}

SymmetricMatrix sample_covariance(const DataMatrix& x) {
  const Index p = x.cols();
  Matrix cov = Matrix::Zero(p, p);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(x.values().transpose(),
                                                 1.0 / static_cast<double>(x.rows()));
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  return SymmetricMatrix(std::move(cov));
}

SymmetricMatrix scaled_gram(const DataMatrix& x) {
  const Index n = x.rows();
  Matrix gram = Matrix::Zero(n, n);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(x.values(),
                                                  1.0 / static_cast<double>(n));
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  return SymmetricMatrix(std::move(gram));
}

EigenSystem cov_eigs_direct(const DataMatrix& x, Index top) {
  check_top(top, x.cols(), "cov_eigs_direct");
  EigenSystem out = sym_eig_desc(sample_covariance(x), top);
  clamp_psd(out.values);
  out.source_rows = x.rows();
  out.source_cols = x.cols();
  return out;
}

EigenSystem cov_eigs_gram(const DataMatrix& x, Index top) {
  const Index n = x.rows();
  check_top(top, std::min(n, x.cols()), "cov_eigs_gram");
  EigenSystem small = sym_eig_desc(scaled_gram(x), top);
  clamp_psd(small.values);

  const double null_level = kNullEigenvalue * std::max(1.0, small.values(0));
  for (Index j = 0; j < top; ++j) {
    if (small.values(j) <= null_level) {
      throw Error(ErrorCode::RankDeficient,
                  "eigenvalue " + std::to_string(j + 1) + " of the Gram matrix is " +
                      std::to_string(small.values(j)) +
                      "; cannot back-transform a null direction");
    }
  }

  EigenSystem out;
  out.values = small.values;
  out.vectors = x.values().transpose() * small.vectors;
  for (Index j = 0; j < top; ++j) {
    out.vectors.col(j) /= std::sqrt(static_cast<double>(n) * out.values(j));
  }
  fix_signs(out.vectors);
  out.source_rows = n;
  out.source_cols = x.cols();
  return out;
}

bool prefers_gram(Index rows, Index cols) noexcept { return cols > rows; }

EigenSystem cov_eigs(const DataMatrix& x, Index top) {
  if (prefers_gram(x.rows(), x.cols()) && top <= x.rows()) {
    try {
      return cov_eigs_gram(x, top);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
    }
  }
  return cov_eigs_direct(x, top);
}

Vector singular_values(const Matrix& a) {
  if (!a.allFinite()) throw_invalid("singular_values: non-finite entries");
  if (a.size() == 0) return Vector();
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

double sum_sq_eigenvalues(const DataMatrix& x) {
  const Index n = x.rows();
  if (n == 0 || x.cols() == 0) return 0.0;
  const Matrix& v = x.values();
  // ||X^T X||_F == ||X X^T||_F; take the smaller product.
  const Matrix product = x.cols() <= n ? Matrix(v.transpose() * v)
                                       : Matrix(v * v.transpose());
  const double scale = 1.0 / static_cast<double>(n);
  return product.squaredNorm() * scale * scale;
}

double SampleSpectrum::tail_sq(Index k) const {
  if (k < 0 || k > leading.size()) {
    throw_invalid("tail_sq: k=" + std::to_string(k) + " outside 0.." +
                  std::to_string(leading.size()));
  }
  const double head = leading.head(k).squaredNorm();
  return std::max(0.0, total_sq - head);
}

SampleSpectrum sample_spectrum(const DataMatrix& x, Index count) {
  const Index n = x.rows();
  const Index p = x.cols();
  const Index small_dim = std::min(n, p);
  if (count < 1 || count > p) {
    throw_invalid("sample_spectrum: requested " + std::to_string(count) +
                  " eigenvalues of a " + std::to_string(p) + "-dim covariance");
  }
  const SymmetricMatrix small = p <= n ? sample_covariance(x) : scaled_gram(x);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(small.entries(),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw_no_convergence(small_dim);

  SampleSpectrum out;
  out.rows = n;
  out.cols = p;
  // Beyond rank min(n, p) the covariance eigenvalues are exactly zero.
  out.leading = Vector::Zero(count);
  const Vector& asc = solver.eigenvalues();
  for (Index j = 0; j < std::min(count, small_dim); ++j) {
    out.leading(j) = asc(small_dim - 1 - j);
  }
  clamp_psd(out.leading);
  out.total_sq = small.entries().squaredNorm();
  return out;
}

}  // namespace factorstab
