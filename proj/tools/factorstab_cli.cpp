// factorstab: choose the number of factors by split-sample loading stability.
//
//   factorstab simulate   --n 500 --p 500 --regime i --scenario S1 --out sim/
//   factorstab experiment --plan plan.cfg --threads 4 --out results/
//   factorstab select     --input data.csv --header --out sel/
//   factorstab realdata   --input expression.csv --header --out real/
//
// Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <factorstab/criteria.hpp>
#include <factorstab/dataio.hpp>
#include <factorstab/error.hpp>
#include <factorstab/mcharness.hpp>
#include <factorstab/numkernel.hpp>
#include <factorstab/realdata.hpp>
#include <factorstab/reports.hpp>
#include <factorstab/simgen.hpp>
#include <factorstab/stability.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace factorstab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
  std::uint64_t seed = 1;
  Index kmax = 10;
  Index splits = 10;
  unsigned threads = 1;
  std::string out = "out";
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NumericalFailure:
    case ErrorCode::RankDeficient:
      return kExitNumerical;
    default:
      return kExitData;
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create directory " + dir + ": " + ec.message());
}

std::string join_path(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

std::vector<Criterion> parse_criteria(const std::vector<std::string>& names) {
  if (names.empty()) return default_criteria();
  std::vector<Criterion> out;
  for (const auto& n : names) out.push_back(parse_criterion(n));
  return out;
}

// --- simulate --------------------------------------------------------------

struct SimulateOptions {
  std::string config;
  Index n = 500;
  Index p = 500;
  Index K = 4;
  std::string regime = "i";
  std::string scenario = "S1";
  std::string factors = "unit";
  std::vector<double> mu;
};

int run_simulate(const GlobalOptions& g, const SimulateOptions& o, const CLI::App& root,
                 const CLI::App& cmd) {
  SimulationConfig cfg;
  if (!o.config.empty()) cfg = load_simulation_config(o.config);
  if (o.config.empty() || cmd.count("--n")) cfg.n = o.n;
  if (o.config.empty() || cmd.count("--p")) cfg.p = o.p;
  if (o.config.empty() || cmd.count("--K")) cfg.K = o.K;
  if (o.config.empty() || cmd.count("--regime")) cfg.regime = parse_regime(o.regime);
  if (o.config.empty() || cmd.count("--scenario")) cfg.scenario = parse_scenario(o.scenario);
  if (o.config.empty() || cmd.count("--factors")) cfg.unit_variance_factors = o.factors == "unit";
  if (!o.mu.empty()) cfg.mu = o.mu;
  if (o.config.empty() || root.count("--seed")) cfg.seed = g.seed;
  cfg.validate();

  const SimulatedDataset ds = simulate_dataset(cfg);
  ensure_dir(g.out);
  write_csv(join_path(g.out, "data.csv"), ds.x, true);
  write_csv(join_path(g.out, "factors.csv"), DataMatrix(ds.factors), true);
  write_csv(join_path(g.out, "loadings.csv"), DataMatrix(ds.loadings), true);
  write_text_file(join_path(g.out, "sim.cfg"), to_config_text(cfg));
  std::cout << "simulated " << cfg.n << " x " << cfg.p << " (K=" << cfg.K << ", "
            << to_string(cfg.scenario) << "(" << to_string(cfg.regime) << ")) -> " << g.out
            << "\n";
  return kExitOk;
}

// --- experiment ------------------------------------------------------------

struct ExperimentOptions {
  std::string plan;
  bool full_scale = false;
  Index replications = 0;
};

int run_experiment_cmd(const GlobalOptions& g, const ExperimentOptions& o,
                       const CLI::App& root) {
  ExperimentPlan plan = o.full_scale ? ExperimentPlan::full_scale() : ExperimentPlan::desk();
  if (!o.plan.empty()) plan = load_plan(o.plan);
  if (o.plan.empty() || root.count("--seed")) plan.master_seed = g.seed;
  if (o.plan.empty() || root.count("--kmax")) plan.kmax = g.kmax;
  if (o.plan.empty() || root.count("--splits")) plan.splits = g.splits;
  if (root.count("--threads")) plan.threads = g.threads;
  if (o.replications > 0) plan.replications = o.replications;
  plan.validate();

  const ExperimentResult result = run_experiment(plan);
  ensure_dir(g.out);
  write_text_file(join_path(g.out, "plan.cfg"), to_plan_text(plan));
  for (const auto& path : emit_reports(result, g.out)) std::cout << "wrote " << path << "\n";

  std::cout << std::left << std::setw(24) << "cell";
  for (Criterion c : plan.criteria) std::cout << std::setw(8) << to_string(c);
  std::cout << "\n";
  for (const CellResult& cell : result.cells) {
    std::cout << std::setw(24) << cell.spec.label();
    if (!cell.completed) {
      std::cout << "FAILED at replication " << cell.failed_rep.value_or(-1) << ": "
                << cell.failure << "\n";
      continue;
    }
    for (const CriterionTally& t : cell.tallies) {
      std::ostringstream pct;
      pct << std::fixed << std::setprecision(0) << t.pct_correct << "%";
      std::cout << std::setw(8) << pct.str();
    }
    std::cout << "\n";
  }
  std::cout << "wall time " << std::fixed << std::setprecision(1) << result.wall_seconds
            << " s\n";

  if (result.all_completed()) return kExitOk;
  for (const CellResult& cell : result.cells) {
    if (!cell.completed && cell.failure_code) return exit_code_for(*cell.failure_code);
  }
  return kExitNumerical;
}

// --- select ----------------------------------------------------------------

struct SelectOptions {
  std::string input;
  bool header = false;
  bool standardize = false;
  std::vector<std::string> criteria;
};

int run_select(const GlobalOptions& g, const SelectOptions& o) {
  DataMatrix x = load_csv(o.input, o.header);
  if (o.standardize) x = standardize(x);
  const auto criteria = parse_criteria(o.criteria);

  const InstabilityCurve curve = ins_curve(x, g.kmax, g.splits, g.seed);
  const SampleSpectrum spectrum = sample_spectrum(x, g.kmax);
  std::vector<CriterionCurve> curves;
  for (Criterion c : criteria) curves.push_back(evaluate(c, curve, spectrum));

  ensure_dir(g.out);
  std::ostringstream crit_csv;
  write_criterion_csv_header(crit_csv);
  for (const auto& c : curves) write_criterion_csv(crit_csv, c);
  write_text_file(join_path(g.out, "criteria.csv"), crit_csv.str());

  std::ostringstream ins_csv;
  ins_csv << "k,ins";
  for (Index j = 1; j <= curve.splits; ++j) ins_csv << ",split" << j;
  ins_csv << "\n";
  for (Index k = 1; k <= curve.kmax; ++k) {
    ins_csv << k << ',' << format_number(curve.at(k));
    for (Index j = 0; j < curve.splits; ++j) ins_csv << ',' << format_number(curve.raw(j, k - 1));
    ins_csv << "\n";
  }
  write_text_file(join_path(g.out, "instability.csv"), ins_csv.str());

  std::cout << "data " << x.rows() << " x " << x.cols() << ", Kmax=" << g.kmax
            << ", J=" << g.splits << "\n";
  std::cout << std::left << std::setw(4) << "k" << std::setw(10) << "INS";
  for (const auto& c : curves) std::cout << std::setw(10) << to_string(c.name);
  std::cout << "\n" << std::fixed << std::setprecision(4);
  for (Index k = 1; k <= g.kmax; ++k) {
    std::cout << std::setw(4) << k << std::setw(10) << curve.at(k);
    for (const auto& c : curves) std::cout << std::setw(10) << c.values(k - 1);
    std::cout << "\n";
  }
  for (const auto& c : curves) {
    std::cout << to_string(c.name) << " selects k = " << c.selected_k << "\n";
  }
  return kExitOk;
}

// --- realdata --------------------------------------------------------------

struct RealDataOptions {
  std::string input;
  bool header = false;
  Index features = 1000;
  Index rows = 3000;
  Index datasets = 100;
  std::vector<std::string> criteria;
};

int run_realdata(const GlobalOptions& g, const RealDataOptions& o) {
  DataMatrix full = load_csv(o.input, o.header);
  if (o.features > 0) full = full.leading_columns(o.features);
  const auto criteria = parse_criteria(o.criteria);

  std::vector<DataMatrix> copies =
      subsample_rows(full, o.rows, o.datasets, derive_seed(g.seed, {stream::kSubsample}));
  for (auto& c : copies) c = standardize(c);

  const RealDataReport report =
      real_data_report(copies, g.kmax, g.splits, criteria, g.seed, g.threads);
  ensure_dir(g.out);
  std::ostringstream csv;
  write_report_csv(csv, report);
  write_text_file(join_path(g.out, "report.csv"), csv.str());
  std::cout << format_report_table(report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Number-of-factors selection by split-sample loading stability"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--kmax", g.kmax, "Largest candidate number of factors")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--splits,-J", g.splits, "Random row splits per instability curve")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate one synthetic factor-model dataset");
  simulate->add_option("--config", sim.config, "Simulation config file (key = value)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--n", sim.n, "Rows")->capture_default_str();
  simulate->add_option("--p", sim.p, "Columns")->capture_default_str();
  simulate->add_option("--K", sim.K, "True number of factors")->capture_default_str();
  simulate->add_option("--regime", sim.regime, "Signal regime: i, ii, iii or explicit")
      ->capture_default_str();
  simulate->add_option("--scenario", sim.scenario, "Error scenario: S1 or S2")
      ->capture_default_str();
  simulate->add_option("--factors", sim.factors, "Factor scores: unit (variance 1) or uniform")
      ->check(CLI::IsMember({"unit", "uniform"}))
      ->capture_default_str();
  simulate->add_option("--mu", sim.mu, "Loading scales for --regime explicit");

  ExperimentOptions exp;
  auto* experiment = app.add_subcommand("experiment", "Run the Monte Carlo comparison");
  experiment->add_option("--plan", exp.plan, "Experiment plan file (plan.cfg)")
      ->check(CLI::ExistingFile);
  experiment->add_flag("--full-scale", exp.full_scale,
                       "Start from the n=1500, R=100 plan instead of the desk plan");
  experiment->add_option("--replications,-R", exp.replications, "Override replications");

  SelectOptions sel;
  auto* select = app.add_subcommand("select", "Run every criterion on one CSV dataset");
  select->add_option("--input", sel.input, "CSV data file")->required()->check(CLI::ExistingFile);
  select->add_flag("--header", sel.header, "First line holds column names");
  select->add_flag("--standardize", sel.standardize, "Standardize columns first");
  select->add_option("--criteria", sel.criteria, "Subset of SC1,SC2,SC3,IC")->delimiter(',');

  RealDataOptions real;
  auto* realdata = app.add_subcommand("realdata", "Repeated row subsampling with a per-criterion stability report");
  realdata->add_option("--input", real.input, "CSV data file")->required()->check(CLI::ExistingFile);
  realdata->add_flag("--header", real.header, "First line holds column names");
  realdata->add_option("--features", real.features, "Use the first p columns (0 = all)")
      ->capture_default_str();
  realdata->add_option("--rows", real.rows, "Rows per subsample")->capture_default_str();
  realdata->add_option("--datasets", real.datasets, "Number of subsamples")->capture_default_str();
  realdata->add_option("--criteria", real.criteria, "Subset of SC1,SC2,SC3,IC")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(g, sim, app, *simulate);
    if (*experiment) return run_experiment_cmd(g, exp, app);
    if (*select) return run_select(g, sel);
    if (*realdata) return run_realdata(g, real);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
