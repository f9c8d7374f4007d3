#pragma once

#include <factorstab/criteria.hpp>
#include <factorstab/error.hpp>
#include <factorstab/simgen.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace factorstab {

/// One simulation setting of the grid.
struct CellSpec {
  ErrorScenario scenario = ErrorScenario::S1;
  SignalRegime regime = SignalRegime::Strong;
  Index n = 500;
  Index p = 500;
  Index K = 4;

  /// e.g. "S1(i)/n=500/p=250"; used as the CSV cell key.
  std::string label() const;
};

struct ExperimentPlan {
  Index n = 500;
  std::vector<Index> p_values{250, 400, 500, 650};
  Index K = 4;
  std::vector<ErrorScenario> scenarios{ErrorScenario::S1, ErrorScenario::S2};
  std::vector<SignalRegime> regimes{SignalRegime::Strong, SignalRegime::Weak,
                                    SignalRegime::Varying};
  Index replications = 50;
  std::vector<Criterion> criteria = default_criteria();
  Index kmax = 10;
  Index splits = 10;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
  bool unit_variance_factors = true;

  /// Desk-scale default: n = 500, p in {250, 400, 500, 650}, R = 50.
  static ExperimentPlan desk();
  /// n = 1500, p in {500, 1000, 1500, 2000}, R = 100. Hours of CPU.
  static ExperimentPlan full_scale();

  void validate() const;
  /// Scenario-major, then regime, then p.
  std::vector<CellSpec> cells() const;
};

/// plan.cfg keys: n, p (list), K, scenarios (list), regimes (list),
/// replications, criteria (list), kmax, splits, seed, threads, factors.
ExperimentPlan parse_plan(std::string_view text, std::string source = "<plan>");
ExperimentPlan load_plan(const std::string& path);
std::string to_plan_text(const ExperimentPlan& plan);

/// Dataset config of replication `rep` in `cell`. The seed depends on the
/// master seed, the cell and rep only, never on R or the thread count.
SimulationConfig replication_config(const ExperimentPlan& plan, const CellSpec& cell,
                                    Index rep);

struct ReplicationOutcome {
  std::vector<Index> selected;  // aligned with the criteria passed in
  Vector ins;                   // INS(1..Kmax)
  std::optional<ErrorCode> error;
  std::string message;

  bool ok() const noexcept { return !error.has_value(); }
};

/// simulate -> INS curve (once, shared by all criteria) -> each criterion.
/// Errors are captured in the outcome rather than thrown.
ReplicationOutcome run_replication(const SimulationConfig& cfg, Index kmax, Index splits,
                                   std::span<const Criterion> criteria);
ReplicationOutcome run_replication(const ExperimentPlan& plan, const CellSpec& cell,
                                   Index rep);

struct CriterionTally {
  Criterion criterion = Criterion::SC1;
  std::vector<Index> counts;  // counts[k-1] = replications selecting k
  double pct_correct = 0.0;
};

struct CellResult {
  CellSpec spec;
  Index replications = 0;
  bool completed = false;
  std::vector<CriterionTally> tallies;
  Vector mean_ins;
  std::vector<std::vector<Index>> selections;  // [rep][criterion]
  // First failing replication, when the cell aborted.
  std::optional<Index> failed_rep;
  std::optional<ErrorCode> failure_code;
  std::string failure;
  double compute_seconds = 0.0;
};

struct ExperimentResult {
  ExperimentPlan plan;
  std::vector<CellResult> cells;
  double wall_seconds = 0.0;

  bool all_completed() const;
};

/// Runs every (cell, replication) job on plan.threads workers and merges in
/// (cell, rep) order, so the result does not depend on the thread count.
ExperimentResult run_experiment(const ExperimentPlan& plan);

}  // namespace factorstab
