#include <factorstab/dataio.hpp>
#include <factorstab/error.hpp>
#include <factorstab/numkernel.hpp>
#include <factorstab/parallel.hpp>
#include <factorstab/realdata.hpp>

#include <iomanip>
#include <ostream>
#include <sstream>

namespace factorstab {

double pairwise_instability(std::span<const SubspaceBasis> bases, unsigned threads,
                            const std::function<void(Index, Index)>& on_pair) {
  const auto d = static_cast<Index>(bases.size());
  if (d < 2) throw_invalid("pairwise instability needs at least 2 bases");
  for (const SubspaceBasis& b : bases) {
    if (b.ambient() != bases.front().ambient()) {
      throw_invalid("bases live in different ambient dimensions (" +
                    std::to_string(b.ambient()) + " vs " +
                    std::to_string(bases.front().ambient()) + ")");
    }
  }
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(d * (d - 1) / 2));
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> sines(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t idx) {
    const auto [i, j] = pairs[idx];
    sines[idx] = symmetric_sin_angle(bases[static_cast<std::size_t>(i)],
                                     bases[static_cast<std::size_t>(j)]);
  });
  double sum = 0.0;
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    if (on_pair) on_pair(pairs[idx].first, pairs[idx].second);
    sum += sines[idx];
  }
  return sum / static_cast<double>(pairs.size());
}

RealDataReport real_data_report(std::span<const DataMatrix> datasets, Index kmax,
                                Index splits, std::span<const Criterion> criteria,
                                std::uint64_t seed, unsigned threads) {
  if (datasets.empty()) throw_invalid("real-data report needs at least one dataset");
  if (criteria.empty()) throw_invalid("real-data report needs at least one criterion");
  const std::size_t d = datasets.size();

  struct PerDataset {
    std::vector<Index> selected;
    Matrix leading;  // p x kmax eigenvectors of the full dataset
  };
  std::vector<PerDataset> per(d);
  parallel_for(d, threads, [&](std::size_t i) {
    const DataMatrix& x = datasets[i];
    const InstabilityCurve curve =
        ins_curve(x, kmax, splits, derive_seed(seed, {stream::kSplits, i}));
    const SampleSpectrum spectrum = sample_spectrum(x, kmax);
    PerDataset& out = per[i];
    for (Criterion c : criteria) out.selected.push_back(evaluate(c, curve, spectrum).selected_k);
    out.leading = cov_eigs(x, kmax).vectors;
  });

  RealDataReport report;
  report.datasets = static_cast<Index>(d);
  report.pairs = static_cast<Index>(d * (d - 1) / 2);
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    RealDataRow row;
    row.criterion = criteria[c];
    std::vector<Index> counts(static_cast<std::size_t>(kmax), 0);
    std::vector<SubspaceBasis> bases;
    for (std::size_t i = 0; i < d; ++i) {
      const Index k = per[i].selected[c];
      row.selections.push_back(k);
      ++counts[static_cast<std::size_t>(k - 1)];
      bases.emplace_back(per[i].leading.leftCols(k));
    }
    for (Index k = 1; k <= kmax; ++k) {
      if (counts[static_cast<std::size_t>(k - 1)] >
          (row.mode ? counts[static_cast<std::size_t>(row.mode - 1)] : 0)) {
        row.mode = k;
      }
    }
    row.mode_pct = 100.0 * static_cast<double>(counts[static_cast<std::size_t>(row.mode - 1)]) /
                   static_cast<double>(d);
    if (d >= 2) row.mean_instability = pairwise_instability(bases, threads);
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_report_csv(std::ostream& out, const RealDataReport& report) {
  out << "criterion,mode,selection_pct,mean_instability\n";
  for (const RealDataRow& row : report.rows) {
    out << to_string(row.criterion) << ',' << row.mode << ',' << format_number(row.mode_pct)
        << ',' << (row.mean_instability ? format_number(*row.mean_instability) : "NA") << '\n';
  }
}

std::string format_report_table(const RealDataReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "Criterion" << std::setw(6) << "Mode" << std::setw(26)
      << "Selection percentage(%)" << "Mean between-sample loading instability\n";
  for (const RealDataRow& row : report.rows) {
    std::ostringstream pct;
    pct << std::fixed << std::setprecision(0) << row.mode_pct;
    std::ostringstream ins;
    if (row.mean_instability) {
      ins << std::fixed << std::setprecision(2) << *row.mean_instability;
    } else {
      ins << "n/a (single dataset)";
    }
    out << std::left << std::setw(10) << to_string(row.criterion) << std::setw(6) << row.mode
        << std::setw(26) << pct.str() << ins.str() << '\n';
  }
  out << "datasets: " << report.datasets << ", pairs: " << report.pairs << '\n';
  return out.str();
}

}  // namespace factorstab
