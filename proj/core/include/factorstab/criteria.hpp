#pragma once

#include <factorstab/data_matrix.hpp>
#include <factorstab/numkernel.hpp>
#include <factorstab/stability.hpp>

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace factorstab {

enum class Criterion { SC1, SC2, SC3, IC, WeightedINS };

std::string_view to_string(Criterion c) noexcept;
Criterion parse_criterion(std::string_view text);

/// The criteria a harness or report evaluates by default.
std::vector<Criterion> default_criteria();

/// Decreasing weights c_1 > c_2 > ... > c_Kmax in [0, 1], added to INS(k)
/// by the weighted selector.
class WeightSequence {
 public:
  explicit WeightSequence(std::vector<double> weights);

  /// c_k = (Kmax - k) / Kmax.
  static WeightSequence linear(Index kmax);

  Index kmax() const noexcept { return static_cast<Index>(weights_.size()); }
  double at(Index k) const { return weights_[static_cast<std::size_t>(k - 1)]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Consistency conditions for a hypothesized true K:
  /// c_k - c_{k+1} > delta for k < K, and 1 - delta > c_K - c_Kmax.
  bool satisfies_gap_conditions(Index true_k, double delta) const;

 private:
  std::vector<double> weights_;
};

/// Per-k values of one criterion over the candidate set {1..Kmax} and the
/// selected k (argmin, ties to the smallest k).
struct CriterionCurve {
  Criterion name = Criterion::SC1;
  Vector values;
  Vector penalty;            // non-INS term at each k
  std::optional<Vector> ins; // absent for IC
  Index selected_k = 0;

  Index kmax() const noexcept { return values.size(); }
};

/// 1-based index of the minimum; ties resolve to the smallest k.
Index argmin_smallest(const Vector& values);

CriterionCurve sc1(const InstabilityCurve& ins);

/// Penalty l(k)/l(0), l(k) = sum_{j=k+1}^{Kmax} log(sigma_j + 1).
CriterionCurve sc2(const InstabilityCurve& ins, const Vector& leading_eigenvalues);
CriterionCurve sc2(const InstabilityCurve& ins, const EigenSystem& eigs);
CriterionCurve sc2(const InstabilityCurve& ins, const SampleSpectrum& spectrum);

/// Penalty log(1 + tail(k)/p) / log(1 + tail(0)/p), tail(k) = sum_{j>k} sigma_j^2.
CriterionCurve sc3(const InstabilityCurve& ins, const SampleSpectrum& spectrum);
CriterionCurve sc3(const InstabilityCurve& ins, const DataMatrix& x);

/// g(n, p) = (n + p)/(n p) * log(n p / (n + p)).
double ic_penalty_rate(Index n, Index p);

/// IC(k) = log(tail(k)/p) + k g(n, p) over k = 1..Kmax.
CriterionCurve ic_baseline(const SampleSpectrum& spectrum, Index kmax);
CriterionCurve ic_baseline(const DataMatrix& x, Index kmax);

CriterionCurve weighted_select(const InstabilityCurve& ins, const WeightSequence& w);

/// Dispatches SC1/SC2/SC3/IC. WeightedINS needs weights, so it is rejected.
CriterionCurve evaluate(Criterion c, const InstabilityCurve& ins,
                        const SampleSpectrum& spectrum);

/// CSV: criterion,k,penalty,ins,value,selected (ins empty for IC).
void write_criterion_csv_header(std::ostream& out);
void write_criterion_csv(std::ostream& out, const CriterionCurve& curve);

}  // namespace factorstab
