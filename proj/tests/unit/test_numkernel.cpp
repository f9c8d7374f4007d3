#include <factorstab/error.hpp>
#include <factorstab/numkernel.hpp>
#include <factorstab/stability.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

#include <cmath>
#include <limits>

using namespace factorstab;
using factorstab::testing::gaussian_matrix;
using factorstab::testing::jacobi_eigenvalues;
using factorstab::testing::random_symmetric;

namespace {

double max_sine(const Matrix& a, const Matrix& b) {
  return directed_sin_angle(SubspaceBasis(a), SubspaceBasis(b));
}

}  // namespace

TEST(SymmetricMatrix, RejectsAsymmetryAndNonFinite) {
  Matrix m(2, 2);
  m << 1, 2, 2.1, 1;
  EXPECT_THROW(SymmetricMatrix{m}, Error);
  m << 1, std::numeric_limits<double>::quiet_NaN(), 0, 1;
  try {
    SymmetricMatrix s(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
  EXPECT_THROW(SymmetricMatrix(Matrix(2, 3)), Error);
}

TEST(SymEigDesc, Identity) {
  const EigenSystem e = sym_eig_desc(SymmetricMatrix(Matrix::Identity(3, 3)));
  ASSERT_EQ(e.count(), 3);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(e.values(i), 1.0, 1e-14);
  EXPECT_LT((e.vectors.transpose() * e.vectors - Matrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(SymEigDesc, DiagonalSignFixed) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1;
  m(1, 1) = 4;
  const EigenSystem e = sym_eig_desc(SymmetricMatrix(m));
  EXPECT_NEAR(e.values(0), 4.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
  EXPECT_NEAR(e.vectors(1, 0), 1.0, 1e-14);
  EXPECT_NEAR(e.vectors(0, 1), 1.0, 1e-14);
}

TEST(SymEigDesc, RandomReconstructionAndJacobiOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_symmetric(8, rng);
    const EigenSystem e = sym_eig_desc(SymmetricMatrix(m));
    const Matrix back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE((m - back).norm(), 1e-8 * m.norm());
    const Vector oracle = jacobi_eigenvalues(m);
    EXPECT_LT((e.values - oracle).cwiseAbs().maxCoeff(), 1e-10);
    for (Index i = 0; i + 1 < e.count(); ++i) EXPECT_GE(e.values(i), e.values(i + 1));
    for (Index j = 0; j < e.count(); ++j) {
      Index arg = 0;
      e.vectors.col(j).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(e.vectors(arg, j), 0.0);
    }
  }
}

TEST(SymEigDesc, TopSubsetAndRepeatability) {
  Rng rng(12);
  const Matrix m = random_symmetric(10, rng);
  const EigenSystem all = sym_eig_desc(SymmetricMatrix(m));
  const EigenSystem top = sym_eig_desc(SymmetricMatrix(m), 3);
  ASSERT_EQ(top.count(), 3);
  EXPECT_EQ(top.values, all.values.head(3));
  const EigenSystem again = sym_eig_desc(SymmetricMatrix(m), 3);
  EXPECT_EQ(top.vectors, again.vectors);
  EXPECT_THROW(sym_eig_desc(SymmetricMatrix(m), 11), Error);
}

TEST(CovEigs, GramOfIdentity) {
  const DataMatrix x(Matrix::Identity(2, 2));
  const EigenSystem e = cov_eigs_gram(x, 2);
  EXPECT_NEAR(e.values(0), 0.5, 1e-14);
  EXPECT_NEAR(e.values(1), 0.5, 1e-14);
}

TEST(CovEigs, GramMatchesDirectWide) {
  Rng rng(13);
  const DataMatrix x(gaussian_matrix(30, 50, rng));
  const EigenSystem g = cov_eigs_gram(x, 10);
  const EigenSystem d = cov_eigs_direct(x, 10);
  EXPECT_LT((g.values - d.values).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT(max_sine(g.vectors.leftCols(4), d.vectors.leftCols(4)), 1e-6);
  EXPECT_LT((g.vectors.transpose() * g.vectors - Matrix::Identity(10, 10)).norm(), 1e-8);
}

TEST(CovEigs, RankOne) {
  Vector u(5), w(7);
  u << 1, -2, 0.5, 3, 1;
  w << 0.1, 2, -1, 0, 0.3, 0.7, -0.2;
  const DataMatrix x(u * w.transpose());
  const double expected = u.squaredNorm() * w.squaredNorm() / 5.0;
  const EigenSystem g = cov_eigs_gram(x, 1);
  EXPECT_NEAR(g.values(0), expected, 1e-12 * expected);
  EXPECT_NEAR(std::abs(g.vectors.col(0).dot(w.normalized())), 1.0, 1e-12);
  EXPECT_THROW(
      {
        try {
          cov_eigs_gram(x, 2);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
          throw;
        }
      },
      Error);
  // The dispatcher falls back to the direct route and still returns 2 pairs.
  const EigenSystem both = cov_eigs(x, 2);
  EXPECT_NEAR(both.values(0), expected, 1e-10 * expected);
  EXPECT_NEAR(both.values(1), 0.0, 1e-10);
}

// Property: Gram route equals the direct route for random shapes.
TEST(CovEigs, GramEquivalenceProperty) {
  Rng rng(14);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 10 + static_cast<Index>(rng.below(51));
    const Index p = 10 + static_cast<Index>(rng.below(51));
    const DataMatrix x(gaussian_matrix(n, p, rng));
    const Index top = std::min<Index>(std::min(n, p), 8);
    const EigenSystem g = cov_eigs_gram(x, top);
    const EigenSystem d = cov_eigs_direct(x, top);
    ASSERT_LT((g.values - d.values).cwiseAbs().maxCoeff(), 1e-8) << n << "x" << p;
    ASSERT_LT(max_sine(g.vectors.leftCols(4), d.vectors.leftCols(4)), 1e-6) << n << "x" << p;
    ASSERT_GE(d.values.minCoeff(), -1e-8);
  }
}

TEST(CovEigs, DispatchRule) {
  EXPECT_TRUE(prefers_gram(10, 11));
  EXPECT_FALSE(prefers_gram(10, 10));
  EXPECT_FALSE(prefers_gram(500, 250));
}

TEST(SingularValues, Examples) {
  Vector s = singular_values(Matrix::Identity(2, 2));
  EXPECT_NEAR(s(0), 1.0, 1e-15);
  EXPECT_NEAR(s(1), 1.0, 1e-15);
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  s = singular_values(a);
  EXPECT_NEAR(s(0), 1.0, 1e-15);
  EXPECT_NEAR(s(1), 0.0, 1e-15);
  Rng rng(15);
  const Matrix r = gaussian_matrix(3, 5, rng);
  s = singular_values(r);
  ASSERT_EQ(s.size(), 3);
  EXPECT_NEAR(s.squaredNorm(), r.squaredNorm(), 1e-10);
  a(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(singular_values(a), Error);
}

TEST(SumSqEigenvalues, Examples) {
  EXPECT_NEAR(sum_sq_eigenvalues(DataMatrix(Matrix::Identity(2, 2))), 0.5, 1e-15);
  EXPECT_EQ(sum_sq_eigenvalues(DataMatrix(Matrix::Zero(4, 3))), 0.0);
}

TEST(SumSqEigenvalues, MatchesJacobiTails) {
  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 5 + static_cast<Index>(rng.below(30));
    const Index p = 5 + static_cast<Index>(rng.below(30));
    const DataMatrix x(gaussian_matrix(n, p, rng));
    const Matrix cov = x.values().transpose() * x.values() / static_cast<double>(n);
    const Vector oracle = jacobi_eigenvalues(cov);
    const double total = oracle.squaredNorm();
    EXPECT_NEAR(sum_sq_eigenvalues(x), total, 1e-8 * total);
    const Index count = std::min<Index>(5, std::min(n, p));
    const SampleSpectrum spec = sample_spectrum(x, count);
    for (Index k = 0; k <= count; ++k) {
      const double tail = oracle.tail(p - k).squaredNorm();
      EXPECT_NEAR(spec.tail_sq(k), tail, 1e-8 * total) << "k=" << k;
    }
  }
}

TEST(SampleSpectrum, PadsBeyondRank) {
  Rng rng(17);
  const DataMatrix x(gaussian_matrix(4, 9, rng));
  const SampleSpectrum s = sample_spectrum(x, 6);
  ASSERT_EQ(s.leading.size(), 6);
  EXPECT_GT(s.leading(3), 0.0);
  EXPECT_EQ(s.leading(4), 0.0);
  EXPECT_EQ(s.leading(5), 0.0);
}
