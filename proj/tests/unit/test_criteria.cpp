#include <factorstab/criteria.hpp>
#include <factorstab/error.hpp>
#include <factorstab/simgen.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace factorstab;
using factorstab::testing::gaussian_matrix;
using factorstab::testing::jacobi_eigenvalues;

namespace {

InstabilityCurve curve(std::vector<double> values) {
  InstabilityCurve c;
  c.kmax = static_cast<Index>(values.size());
  c.splits = 1;
  c.ins = Eigen::Map<Vector>(values.data(), c.kmax);
  c.raw = c.ins.transpose();
  return c;
}

InstabilityCurve step_at(Index kmax, Index k0) {
  std::vector<double> v(static_cast<std::size_t>(kmax), 1.0);
  for (Index k = 0; k < k0; ++k) v[static_cast<std::size_t>(k)] = 0.0;
  return curve(v);
}

SampleSpectrum spectrum_of(const Vector& all_eigs, Index n, Index kmax) {
  SampleSpectrum s;
  s.leading = all_eigs.head(kmax);
  s.total_sq = all_eigs.squaredNorm();
  s.rows = n;
  s.cols = all_eigs.size();
  return s;
}

}  // namespace

TEST(Argmin, SmallestOnTies) {
  Vector v(5);
  v << 3, 1, 2, 1, 1;
  EXPECT_EQ(argmin_smallest(v), 2);
  v.setConstant(0.25);
  EXPECT_EQ(argmin_smallest(v), 1);
  EXPECT_THROW(argmin_smallest(Vector()), Error);
}

TEST(Sc1, Examples) {
  const CriterionCurve c = sc1(step_at(10, 4));
  EXPECT_EQ(c.selected_k, 4);
  EXPECT_NEAR(c.values(3), 0.6, 1e-15);
  EXPECT_EQ(c.penalty(9), 0.0);
  EXPECT_EQ(c.values(9), 1.0);
  EXPECT_EQ(sc1(curve(std::vector<double>(10, 0.0))).selected_k, 10);
}

TEST(Sc2, AnalyticLogs) {
  Vector eig = Vector::Zero(10);
  eig(0) = eig(1) = std::numbers::e - 1.0;
  const CriterionCurve c = sc2(curve(std::vector<double>(10, 0.0)), eig);
  EXPECT_NEAR(c.penalty(0), 0.5, 1e-15);
  EXPECT_EQ(c.penalty(9), 0.0);
  EXPECT_THROW(sc2(curve(std::vector<double>(3, 0.0)), Vector::Zero(3)), Error);
  EXPECT_THROW(sc2(curve(std::vector<double>(3, 0.0)), Vector::Ones(2)), Error);
}

TEST(Sc2, PenaltyStrictlyDecreasing) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    Vector eig(8);
    for (Index i = 0; i < 8; ++i) eig(i) = 0.01 + 10.0 * rng.uniform();
    std::sort(eig.data(), eig.data() + 8, std::greater<>());
    const CriterionCurve c = sc2(curve(std::vector<double>(8, 0.5)), eig);
    for (Index k = 0; k + 1 < 8; ++k) EXPECT_GT(c.penalty(k), c.penalty(k + 1));
  }
}

TEST(Sc3, EqualEigenvaluesClosedForm) {
  const Index p = 12;
  const double s = 1.7;
  const Vector eig = Vector::Constant(p, s);
  const CriterionCurve c = sc3(curve(std::vector<double>(6, 0.0)), spectrum_of(eig, 20, 6));
  for (Index k = 1; k <= 6; ++k) {
    const double expected = std::log(1.0 + (p - k) * s * s / p) / std::log(1.0 + s * s);
    EXPECT_NEAR(c.penalty(k - 1), expected, 1e-14);
  }
}

TEST(Sc3, TailIdentityMatchesFullEigen) {
  Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 20 + static_cast<Index>(rng.below(30));
    const Index p = 10 + static_cast<Index>(rng.below(30));
    const DataMatrix x(gaussian_matrix(n, p, rng));
    const Vector all = jacobi_eigenvalues(x.values().transpose() * x.values() / double(n));
    const InstabilityCurve ins = curve(std::vector<double>(5, 0.3));
    const CriterionCurve fast = sc3(ins, x);
    const double denom = std::log1p(all.squaredNorm() / p);
    for (Index k = 1; k <= 5; ++k) {
      EXPECT_NEAR(fast.penalty(k - 1), std::log1p(all.tail(p - k).squaredNorm() / p) / denom,
                  1e-8);
    }
  }
  EXPECT_THROW(sc3(curve({0.0, 0.0}), DataMatrix(Matrix::Zero(6, 4))), Error);
}

TEST(Ic, PenaltyRate) {
  EXPECT_NEAR(ic_penalty_rate(200, 200), 0.01 * std::log(100.0), 1e-15);
  EXPECT_NEAR(ic_penalty_rate(200, 200), 0.046051701859880916, 1e-15);
  EXPECT_NEAR(ic_penalty_rate(80, 80), (2.0 / 80) * std::log(40.0), 1e-15);
}

TEST(Ic, ValuesAndErrors) {
  Rng rng(33);
  const DataMatrix x(gaussian_matrix(40, 15, rng));
  const CriterionCurve c = ic_baseline(x, 6);
  EXPECT_FALSE(c.ins.has_value());
  const double g = ic_penalty_rate(40, 15);
  const Vector all = jacobi_eigenvalues(x.values().transpose() * x.values() / 40.0);
  for (Index k = 1; k <= 6; ++k) {
    EXPECT_NEAR(c.penalty(k - 1), k * g, 1e-15);
    EXPECT_NEAR(c.values(k - 1), std::log(all.tail(15 - k).squaredNorm() / 15) + k * g, 1e-8);
  }
  // Rank-2 data: the tail beyond k=2 is zero.
  Matrix r = gaussian_matrix(20, 2, rng) * gaussian_matrix(2, 8, rng);
  EXPECT_THROW(
      {
        try {
          ic_baseline(DataMatrix(r), 4);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::DegenerateInput);
          throw;
        }
      },
      Error);
}

TEST(Weighted, MatchesSc1Exactly) {
  Rng rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(10);
    for (double& x : v) x = rng.uniform();
    const InstabilityCurve ins = curve(v);
    const CriterionCurve a = sc1(ins);
    const CriterionCurve b = weighted_select(ins, WeightSequence::linear(10));
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.selected_k, b.selected_k);
  }
}

TEST(Weighted, ConstantGapSelectsStep) {
  std::vector<double> c;
  for (int k = 0; k < 10; ++k) c.push_back(0.9 - 0.1 * k + 0.05);
  const WeightSequence w(c);
  EXPECT_TRUE(w.satisfies_gap_conditions(4, 0.05));
  EXPECT_EQ(weighted_select(step_at(10, 4), w).selected_k, 4);
  EXPECT_EQ(weighted_select(curve(std::vector<double>(10, 0.0)), w).selected_k, 10);
}

TEST(Weighted, Validation) {
  EXPECT_THROW(WeightSequence({0.5, 0.5}), Error);
  EXPECT_THROW(WeightSequence({0.5, 0.6}), Error);
  EXPECT_THROW(WeightSequence({1.5, 0.6}), Error);
  EXPECT_THROW(WeightSequence({}), Error);
  EXPECT_THROW(weighted_select(step_at(3, 1), WeightSequence::linear(4)), Error);
  const WeightSequence lin = WeightSequence::linear(10);
  EXPECT_TRUE(lin.satisfies_gap_conditions(4, 0.05));
  EXPECT_FALSE(lin.satisfies_gap_conditions(4, 0.2));
}

TEST(Criteria, PenaltyBoundsOnRandomData) {
  Rng rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 20 + static_cast<Index>(rng.below(40));
    const Index p = 10 + static_cast<Index>(rng.below(40));
    const DataMatrix x(gaussian_matrix(n, p, rng));
    const InstabilityCurve ins = ins_curve(x, 5, 3, trial);
    const SampleSpectrum s = sample_spectrum(x, 5);
    for (Criterion c : {Criterion::SC1, Criterion::SC2, Criterion::SC3}) {
      const CriterionCurve cc = evaluate(c, ins, s);
      for (Index k = 0; k < 5; ++k) {
        EXPECT_GE(cc.penalty(k), 0.0);
        EXPECT_LE(cc.penalty(k), 1.0);
        EXPECT_GE(cc.values(k), 0.0);
        EXPECT_LE(cc.values(k), 2.0);
        if (k > 0) EXPECT_LE(cc.penalty(k), cc.penalty(k - 1));
      }
      EXPECT_GE(cc.selected_k, 1);
      EXPECT_LE(cc.selected_k, 5);
    }
  }
  EXPECT_THROW(evaluate(Criterion::WeightedINS, curve({0.0}), SampleSpectrum{}), Error);
}

// Under regime (i) the normalized SC2 gaps for k <= K stay well above zero.
TEST(Sc2, GapBoundedAwayFromZeroStrongRegime) {
  SimulationConfig cfg;
  cfg.n = 300;
  cfg.p = 300;
  const SampleSpectrum s = sample_spectrum(simulate_dataset(cfg).x, 10);
  const CriterionCurve c = sc2(curve(std::vector<double>(10, 0.0)), s);
  double prev = 1.0;
  for (Index k = 1; k <= 4; ++k) {
    EXPECT_GT(prev - c.penalty(k - 1), 1e-3) << "k=" << k;
    prev = c.penalty(k - 1);
  }
}

TEST(Criteria, Names) {
  for (Criterion c : {Criterion::SC1, Criterion::SC2, Criterion::SC3, Criterion::IC,
                      Criterion::WeightedINS}) {
    EXPECT_EQ(parse_criterion(to_string(c)), c);
  }
  EXPECT_THROW(parse_criterion("AIC"), Error);
}

TEST(Criteria, CsvRows) {
  std::ostringstream out;
  write_criterion_csv_header(out);
  write_criterion_csv(out, sc1(step_at(2, 1)));
  EXPECT_EQ(out.str(),
            "criterion,k,penalty,ins,value,selected\n"
            "SC1,1,0.5,0,0.5,1\n"
            "SC1,2,0,1,1,0\n");
}
