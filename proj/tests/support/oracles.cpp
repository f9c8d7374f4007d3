#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace factorstab::testing {
namespace {

double sine_to_subspace(const Matrix& u, const Matrix& v, const Vector& coeffs) {
  const Vector x = u * coeffs.normalized();
  const double cos2 = std::min(1.0, (v.transpose() * x).squaredNorm());
  return std::sqrt(std::max(0.0, 1.0 - cos2));
}

std::vector<Vector> sphere_samples(Index k) {
  std::vector<Vector> out;
  if (k == 1) {
    out.push_back(Vector::Constant(1, 1.0));
    return out;
  }
  if (k == 2) {
    constexpr int kSteps = 4000;
    for (int i = 0; i < kSteps; ++i) {
      const double t = std::numbers::pi * i / kSteps;
      Vector c(2);
      c << std::cos(t), std::sin(t);
      out.push_back(c);
    }
    return out;
  }
  // Fibonacci lattice on the sphere (antipodal points give the same sine).
  constexpr int kPoints = 40000;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < kPoints; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / kPoints;
    const double r = std::sqrt(1.0 - z * z);
    Vector c(k);
    c.setZero();
    c(0) = r * std::cos(golden * i);
    c(1) = r * std::sin(golden * i);
    c(2) = z;
    out.push_back(c);
  }
  return out;
}

}  // namespace

double brute_force_directed_sine(const Matrix& u, const Matrix& v, Rng& rng) {
  const Index k = u.cols();
  Vector best_c;
  double best = -1.0;
  for (const Vector& c : sphere_samples(k)) {
    const double s = sine_to_subspace(u, v, c);
    if (s > best) {
      best = s;
      best_c = c;
    }
  }
  // Local ascent: random perturbations with a shrinking radius.
  double step = 0.05;
  while (step > 1e-7) {
    bool improved = false;
    for (int trial = 0; trial < 40; ++trial) {
      Vector c = best_c;
      for (Index i = 0; i < k; ++i) c(i) += step * rng.normal();
      const double s = sine_to_subspace(u, v, c);
      if (s > best) {
        best = s;
        best_c = c.normalized();
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

Matrix random_orthonormal_basis(Index p, Index k, Rng& rng) {
  Matrix q = gaussian_matrix(p, k, rng);
  for (Index j = 0; j < k; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    }
    q.col(j).normalize();
  }
  return q;
}

Matrix random_symmetric(Index dim, Rng& rng) {
  const Matrix a = gaussian_matrix(dim, dim, rng);
  return (a + a.transpose()) / 2.0;
}

Vector jacobi_eigenvalues(const Matrix& symmetric, double tol) {
  Matrix a = symmetric;
  const Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off <= tol * tol * std::max(1.0, a.squaredNorm())) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index r = 0; r < n; ++r) {
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (Index r = 0; r < n; ++r) {
          const double apr = a(p, r);
          const double aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
      }
    }
  }
  std::vector<double> values(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(values.begin(), values.end(), std::greater<>());
  return Eigen::Map<Vector>(values.data(), n);
}

}  // namespace factorstab::testing
