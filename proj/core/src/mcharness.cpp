#include <factorstab/config.hpp>
#include <factorstab/mcharness.hpp>
#include <factorstab/numkernel.hpp>
#include <factorstab/parallel.hpp>
#include <factorstab/stability.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <sstream>

namespace factorstab {
namespace {

using Clock = std::chrono::steady_clock;

Index parse_index(const std::string& item, const char* what) {
  Index v = 0;
  auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
  if (ec != std::errc() || ptr != item.data() + item.size()) {
    throw_invalid(std::string(what) + " entry `" + item + "` is not an integer");
  }
  return v;
}

template <class T, class Fmt>
std::string join(const std::vector<T>& items, Fmt fmt) {
  std::ostringstream out;
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? ", " : "") << fmt(items[i]);
  return out.str();
}

}  // namespace

std::string CellSpec::label() const {
  std::ostringstream out;
  out << to_string(scenario) << '(' << to_string(regime) << ")/n=" << n << "/p=" << p;
  return out.str();
}

ExperimentPlan ExperimentPlan::desk() { return ExperimentPlan{}; }

ExperimentPlan ExperimentPlan::full_scale() {
  ExperimentPlan plan;
  plan.n = 1500;
  plan.p_values = {500, 1000, 1500, 2000};
  plan.replications = 100;
  return plan;
}

void ExperimentPlan::validate() const {
  if (replications < 1) throw_invalid("replications must be >= 1");
  if (splits < 1) throw_invalid("splits must be >= 1");
  if (p_values.empty() || scenarios.empty() || regimes.empty()) {
    throw_invalid("plan grid is empty (need p, scenarios and regimes)");
  }
  if (criteria.empty()) throw_invalid("plan lists no criteria");
  for (Criterion c : criteria) {
    if (c == Criterion::WeightedINS) {
      throw_invalid("WeightedINS is not a harness criterion (needs weights)");
    }
  }
  if (threads < 1) throw_invalid("threads must be >= 1");
  for (const CellSpec& cell : cells()) {
    if (kmax < 1 || kmax > std::min(cell.n / 2, cell.p)) {
      throw_invalid("Kmax=" + std::to_string(kmax) + " invalid for cell " + cell.label());
    }
    if (cell.n < 4) throw_invalid("n must be >= 4 for data splitting");
    SimulationConfig cfg;
    cfg.n = cell.n;
    cfg.p = cell.p;
    cfg.K = cell.K;
    cfg.regime = cell.regime;
    cfg.scenario = cell.scenario;
    cfg.validate();
  }
}

std::vector<CellSpec> ExperimentPlan::cells() const {
  std::vector<CellSpec> out;
  for (ErrorScenario s : scenarios) {
    for (SignalRegime r : regimes) {
      for (Index p : p_values) out.push_back(CellSpec{s, r, n, p, K});
    }
  }
  return out;
}

ExperimentPlan parse_plan(std::string_view text, std::string source) {
  auto kv = KeyValueConfig::parse(text, std::move(source));
  ExperimentPlan plan;
  if (auto v = kv.take_int("n")) plan.n = *v;
  if (auto v = kv.take_list("p")) {
    plan.p_values.clear();
    for (const auto& item : *v) plan.p_values.push_back(parse_index(item, "p"));
  }
  if (auto v = kv.take_int("K")) plan.K = *v;
  if (auto v = kv.take_list("scenarios")) {
    plan.scenarios.clear();
    for (const auto& item : *v) plan.scenarios.push_back(parse_scenario(item));
  }
  if (auto v = kv.take_list("regimes")) {
    plan.regimes.clear();
    for (const auto& item : *v) plan.regimes.push_back(parse_regime(item));
  }
  if (auto v = kv.take_int("replications")) plan.replications = *v;
  if (auto v = kv.take_list("criteria")) {
    plan.criteria.clear();
    for (const auto& item : *v) plan.criteria.push_back(parse_criterion(item));
  }
  if (auto v = kv.take_int("kmax")) plan.kmax = *v;
  if (auto v = kv.take_int("splits")) plan.splits = *v;
  if (auto v = kv.take_u64("seed")) plan.master_seed = *v;
  if (auto v = kv.take_int("threads")) {
    if (*v < 1) throw_invalid("threads must be >= 1");
    plan.threads = static_cast<unsigned>(*v);
  }
  if (auto v = kv.take_string("factors")) {
    if (*v == "unit") {
      plan.unit_variance_factors = true;
    } else if (*v == "uniform") {
      plan.unit_variance_factors = false;
    } else {
      throw_invalid("factors must be `unit` or `uniform`, got `" + *v + "`");
    }
  }
  kv.expect_consumed();
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  return parse_plan(read_text_file(path), path);
}

std::string to_plan_text(const ExperimentPlan& plan) {
  std::ostringstream out;
  out << "n = " << plan.n << '\n'
      << "p = " << join(plan.p_values, [](Index p) { return std::to_string(p); }) << '\n'
      << "K = " << plan.K << '\n'
      << "scenarios = " << join(plan.scenarios, [](ErrorScenario s) { return to_string(s); })
      << '\n'
      << "regimes = " << join(plan.regimes, [](SignalRegime r) { return to_string(r); })
      << '\n'
      << "replications = " << plan.replications << '\n'
      << "criteria = " << join(plan.criteria, [](Criterion c) { return to_string(c); })
      << '\n'
      << "kmax = " << plan.kmax << '\n'
      << "splits = " << plan.splits << '\n'
      << "seed = " << plan.master_seed << '\n'
      << "threads = " << plan.threads << '\n'
      << "factors = " << (plan.unit_variance_factors ? "unit" : "uniform") << '\n';
  return out.str();
}

SimulationConfig replication_config(const ExperimentPlan& plan, const CellSpec& cell,
                                    Index rep) {
  SimulationConfig cfg;
  cfg.n = cell.n;
  cfg.p = cell.p;
  cfg.K = cell.K;
  cfg.regime = cell.regime;
  cfg.scenario = cell.scenario;
  cfg.unit_variance_factors = plan.unit_variance_factors;
  cfg.seed = derive_seed(plan.master_seed,
                         {stream::kReplication, static_cast<std::uint64_t>(cell.scenario),
                          static_cast<std::uint64_t>(cell.regime),
                          static_cast<std::uint64_t>(cell.n),
                          static_cast<std::uint64_t>(cell.p),
                          static_cast<std::uint64_t>(cell.K),
                          static_cast<std::uint64_t>(rep)});
  return cfg;
}

ReplicationOutcome run_replication(const SimulationConfig& cfg, Index kmax, Index splits,
                                   std::span<const Criterion> criteria) {
  ReplicationOutcome out;
  try {
    const SimulatedDataset ds = simulate_dataset(cfg);
    const InstabilityCurve curve =
        ins_curve(ds.x, kmax, splits, derive_seed(cfg.seed, {stream::kSplits}));
    const SampleSpectrum spectrum = sample_spectrum(ds.x, kmax);
    out.ins = curve.ins;
    out.selected.reserve(criteria.size());
    for (Criterion c : criteria) {
      out.selected.push_back(evaluate(c, curve, spectrum).selected_k);
    }
  } catch (const Error& e) {
    out.selected.clear();
    out.error = e.code();
    out.message = e.what();
  } catch (const std::exception& e) {
    out.selected.clear();
    out.error = ErrorCode::NumericalFailure;
    out.message = e.what();
  }
  return out;
}

ReplicationOutcome run_replication(const ExperimentPlan& plan, const CellSpec& cell,
                                   Index rep) {
  return run_replication(replication_config(plan, cell, rep), plan.kmax, plan.splits,
                         plan.criteria);
}

bool ExperimentResult::all_completed() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const CellResult& c) { return c.completed; });
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  const auto start = Clock::now();
  const std::vector<CellSpec> cells = plan.cells();
  const auto reps = static_cast<std::size_t>(plan.replications);

  std::vector<ReplicationOutcome> outcomes(cells.size() * reps);
  std::vector<double> seconds(outcomes.size(), 0.0);
  parallel_for(outcomes.size(), plan.threads, [&](std::size_t job) {
    const auto t0 = Clock::now();
    outcomes[job] = run_replication(plan, cells[job / reps], static_cast<Index>(job % reps));
    seconds[job] = std::chrono::duration<double>(Clock::now() - t0).count();
  });

  ExperimentResult result;
  result.plan = plan;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult cell;
    cell.spec = cells[c];
    cell.replications = plan.replications;
    for (std::size_t r = 0; r < reps; ++r) {
      const ReplicationOutcome& o = outcomes[c * reps + r];
      cell.compute_seconds += seconds[c * reps + r];
      if (!o.ok() && !cell.failed_rep) {
        cell.failed_rep = static_cast<Index>(r);
        cell.failure_code = o.error;
        cell.failure = o.message;
      }
    }
    if (cell.failed_rep) {
      result.cells.push_back(std::move(cell));
      continue;
    }
    cell.completed = true;
    cell.mean_ins = Vector::Zero(plan.kmax);
    for (Criterion crit : plan.criteria) {
      CriterionTally t;
      t.criterion = crit;
      t.counts.assign(static_cast<std::size_t>(plan.kmax), 0);
      cell.tallies.push_back(std::move(t));
    }
    for (std::size_t r = 0; r < reps; ++r) {
      const ReplicationOutcome& o = outcomes[c * reps + r];
      cell.mean_ins += o.ins;
      cell.selections.push_back(o.selected);
      for (std::size_t i = 0; i < o.selected.size(); ++i) {
        ++cell.tallies[i].counts[static_cast<std::size_t>(o.selected[i] - 1)];
      }
    }
    cell.mean_ins /= static_cast<double>(reps);
    for (CriterionTally& t : cell.tallies) {
      const Index correct =
          cell.spec.K <= plan.kmax ? t.counts[static_cast<std::size_t>(cell.spec.K - 1)] : 0;
      t.pct_correct = 100.0 * static_cast<double>(correct) / static_cast<double>(reps);
    }
    result.cells.push_back(std::move(cell));
  }
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace factorstab
