#pragma once

#include <factorstab/criteria.hpp>
#include <factorstab/stability.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace factorstab {

/// Mean symmetric sine over all D(D-1)/2 unordered pairs of bases. Pairs
/// are visited as (i, j), i < j, in lexicographic order; `on_pair` is called
/// for each. Bases may have different dimensions.
double pairwise_instability(std::span<const SubspaceBasis> bases, unsigned threads = 1,
                            const std::function<void(Index, Index)>& on_pair = {});

struct RealDataRow {
  Criterion criterion = Criterion::SC1;
  Index mode = 0;         // most frequent selected k, ties to the smallest
  double mode_pct = 0.0;  // share of datasets selecting the mode, in %
  // Undefined for a single dataset.
  std::optional<double> mean_instability;
  std::vector<Index> selections;  // per dataset
};

struct RealDataReport {
  std::vector<RealDataRow> rows;
  Index datasets = 0;
  Index pairs = 0;
};

/// Selects k per dataset and criterion (INS from `splits` random splits,
/// penalties from the full-sample spectrum), then measures how reproducible
/// each criterion's loading spaces are across datasets. Datasets are
/// expected to be standardized already.
RealDataReport real_data_report(std::span<const DataMatrix> datasets, Index kmax,
                                Index splits, std::span<const Criterion> criteria,
                                std::uint64_t seed, unsigned threads = 1);

/// criterion,mode,selection_pct,mean_instability (NA when undefined).
void write_report_csv(std::ostream& out, const RealDataReport& report);
std::string format_report_table(const RealDataReport& report);

}  // namespace factorstab
