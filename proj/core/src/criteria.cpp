#include <factorstab/criteria.hpp>
#include <factorstab/dataio.hpp>
#include <factorstab/error.hpp>

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

namespace factorstab {
namespace {

// A tail sum this small relative to the total is round-off from subtracting
// the leading squares, i.e. numerically zero.
constexpr double kZeroTailRel = 1e-12;

void check_curve(const InstabilityCurve& ins) {
  if (ins.kmax < 1 || ins.ins.size() != ins.kmax) {
    throw_invalid("instability curve has inconsistent Kmax");
  }
}

CriterionCurve combine(Criterion name, const InstabilityCurve& ins, Vector penalty) {
  CriterionCurve out;
  out.name = name;
  out.values = penalty + ins.ins;
  out.penalty = std::move(penalty);
  out.ins = ins.ins;
  out.selected_k = argmin_smallest(out.values);
  return out;
}

}  // namespace

std::string_view to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::SC1: return "SC1";
    case Criterion::SC2: return "SC2";
    case Criterion::SC3: return "SC3";
    case Criterion::IC: return "IC";
    case Criterion::WeightedINS: return "WeightedINS";
  }
  return "?";
}

Criterion parse_criterion(std::string_view text) {
  for (Criterion c : {Criterion::SC1, Criterion::SC2, Criterion::SC3, Criterion::IC,
                      Criterion::WeightedINS}) {
    if (text == to_string(c)) return c;
  }
  throw_invalid("unknown criterion `" + std::string(text) + "`");
}

std::vector<Criterion> default_criteria() {
  return {Criterion::SC1, Criterion::SC2, Criterion::SC3, Criterion::IC};
}

WeightSequence::WeightSequence(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw_invalid("weight sequence is empty");
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const double c = weights_[k];
    if (!(c >= 0.0 && c <= 1.0)) {
      throw_invalid("weight c_" + std::to_string(k + 1) + "=" + format_number(c) +
                    " outside [0, 1]");
    }
    if (k > 0 && !(weights_[k - 1] > c)) {
      throw_invalid("weights must be strictly decreasing (c_" + std::to_string(k) +
                    " <= c_" + std::to_string(k + 1) + ")");
    }
  }
}

WeightSequence WeightSequence::linear(Index kmax) {
  if (kmax < 1) throw_invalid("Kmax must be >= 1");
  std::vector<double> c(static_cast<std::size_t>(kmax));
  for (Index k = 1; k <= kmax; ++k) {
    c[static_cast<std::size_t>(k - 1)] =
        static_cast<double>(kmax - k) / static_cast<double>(kmax);
  }
  return WeightSequence(std::move(c));
}

bool WeightSequence::satisfies_gap_conditions(Index true_k, double delta) const {
  if (true_k < 1 || true_k > kmax() || !(delta > 0.0)) return false;
  for (Index k = 1; k < true_k; ++k) {
    if (!(at(k) - at(k + 1) > delta)) return false;
  }
  return 1.0 - delta > at(true_k) - at(kmax());
}

Index argmin_smallest(const Vector& values) {
  if (values.size() == 0) throw_invalid("argmin over an empty candidate set");
  Index best = 0;
  for (Index k = 1; k < values.size(); ++k) {
    if (values(k) < values(best)) best = k;
  }
  return best + 1;
}

CriterionCurve sc1(const InstabilityCurve& ins) {
  check_curve(ins);
  const Index kmax = ins.kmax;
  Vector penalty(kmax);
  for (Index k = 1; k <= kmax; ++k) {
    penalty(k - 1) = static_cast<double>(kmax - k) / static_cast<double>(kmax);
  }
  return combine(Criterion::SC1, ins, std::move(penalty));
}

CriterionCurve sc2(const InstabilityCurve& ins, const Vector& leading_eigenvalues) {
  check_curve(ins);
  const Index kmax = ins.kmax;
  if (leading_eigenvalues.size() < kmax) {
    throw_invalid("SC2 needs " + std::to_string(kmax) + " eigenvalues, got " +
                  std::to_string(leading_eigenvalues.size()));
  }
  // l(k) accumulated from the back: l(Kmax) = 0.
  Vector l = Vector::Zero(kmax + 1);
  for (Index k = kmax - 1; k >= 0; --k) {
    l(k) = l(k + 1) + std::log1p(std::max(0.0, leading_eigenvalues(k)));
  }
  if (!(l(0) > 0.0)) {
    throw Error(ErrorCode::DegenerateInput,
                "SC2: the leading " + std::to_string(kmax) +
                    " eigenvalues are all zero, l(0) = 0");
  }
  Vector penalty = l.tail(kmax) / l(0);
  return combine(Criterion::SC2, ins, std::move(penalty));
}

CriterionCurve sc2(const InstabilityCurve& ins, const EigenSystem& eigs) {
  return sc2(ins, eigs.values);
}

CriterionCurve sc2(const InstabilityCurve& ins, const SampleSpectrum& spectrum) {
  return sc2(ins, spectrum.leading);
}

CriterionCurve sc3(const InstabilityCurve& ins, const SampleSpectrum& spectrum) {
  check_curve(ins);
  const Index kmax = ins.kmax;
  if (spectrum.leading.size() < kmax) {
    throw_invalid("SC3 needs " + std::to_string(kmax) + " leading eigenvalues");
  }
  if (!(spectrum.total_sq > 0.0)) {
    throw Error(ErrorCode::DegenerateInput, "SC3: data matrix is zero");
  }
  const double p = static_cast<double>(spectrum.cols);
  const double denom = std::log1p(spectrum.total_sq / p);
  Vector penalty(kmax);
  for (Index k = 1; k <= kmax; ++k) {
    penalty(k - 1) = std::log1p(spectrum.tail_sq(k) / p) / denom;
  }
  return combine(Criterion::SC3, ins, std::move(penalty));
}

CriterionCurve sc3(const InstabilityCurve& ins, const DataMatrix& x) {
  if (x.rows() == 0 || x.values().isZero(0.0)) {
    throw Error(ErrorCode::DegenerateInput, "SC3: data matrix is zero");
  }
  return sc3(ins, sample_spectrum(x, ins.kmax));
}

double ic_penalty_rate(Index n, Index p) {
  const double dn = static_cast<double>(n);
  const double dp = static_cast<double>(p);
  return (dn + dp) / (dn * dp) * std::log(dn * dp / (dn + dp));
}

CriterionCurve ic_baseline(const SampleSpectrum& spectrum, Index kmax) {
  if (kmax < 1 || spectrum.leading.size() < kmax) {
    throw_invalid("IC needs Kmax >= 1 leading eigenvalues, got " +
                  std::to_string(spectrum.leading.size()) + " for Kmax=" +
                  std::to_string(kmax));
  }
  const double p = static_cast<double>(spectrum.cols);
  const double g = ic_penalty_rate(spectrum.rows, spectrum.cols);
  CriterionCurve out;
  out.name = Criterion::IC;
  out.values.resize(kmax);
  out.penalty.resize(kmax);
  for (Index k = 1; k <= kmax; ++k) {
    const double tail = spectrum.tail_sq(k);
    if (!(tail > kZeroTailRel * spectrum.total_sq) || !(tail > 0.0)) {
      throw Error(ErrorCode::DegenerateInput,
                  "IC: residual eigenvalue mass beyond k=" + std::to_string(k) +
                      " is zero; log undefined");
    }
    out.penalty(k - 1) = static_cast<double>(k) * g;
    out.values(k - 1) = std::log(tail / p) + out.penalty(k - 1);
  }
  out.selected_k = argmin_smallest(out.values);
  return out;
}

CriterionCurve ic_baseline(const DataMatrix& x, Index kmax) {
  if (kmax < 1 || kmax > x.cols()) {
    throw_invalid("IC: Kmax=" + std::to_string(kmax) + " outside 1..p");
  }
  return ic_baseline(sample_spectrum(x, kmax), kmax);
}

CriterionCurve weighted_select(const InstabilityCurve& ins, const WeightSequence& w) {
  check_curve(ins);
  if (w.kmax() != ins.kmax) {
    throw_invalid("weight sequence has " + std::to_string(w.kmax()) +
                  " entries, curve has Kmax=" + std::to_string(ins.kmax));
  }
  Vector penalty = Eigen::Map<const Vector>(w.weights().data(), w.kmax());
  return combine(Criterion::WeightedINS, ins, std::move(penalty));
}

CriterionCurve evaluate(Criterion c, const InstabilityCurve& ins,
                        const SampleSpectrum& spectrum) {
  switch (c) {
    case Criterion::SC1: return sc1(ins);
    case Criterion::SC2: return sc2(ins, spectrum);
    case Criterion::SC3: return sc3(ins, spectrum);
    case Criterion::IC: return ic_baseline(spectrum, ins.kmax);
    case Criterion::WeightedINS: break;
  }
  throw_invalid("WeightedINS needs an explicit weight sequence");
}

void write_criterion_csv_header(std::ostream& out) {
  out << "criterion,k,penalty,ins,value,selected\n";
}

void write_criterion_csv(std::ostream& out, const CriterionCurve& curve) {
  for (Index k = 1; k <= curve.kmax(); ++k) {
    out << to_string(curve.name) << ',' << k << ',' << format_number(curve.penalty(k - 1))
        << ',' << (curve.ins ? format_number((*curve.ins)(k - 1)) : std::string()) << ','
        << format_number(curve.values(k - 1)) << ',' << (k == curve.selected_k ? 1 : 0)
        << '\n';
  }
}

}  // namespace factorstab
