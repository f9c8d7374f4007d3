#include <factorstab/config.hpp>
#include <factorstab/dataio.hpp>
#include <factorstab/error.hpp>
#include <factorstab/simgen.hpp>

#include <charconv>
#include <cmath>
#include <sstream>

namespace factorstab {
namespace {

constexpr int kStudentDof = 10;

}  // namespace

std::string_view to_string(SignalRegime r) noexcept {
  switch (r) {
    case SignalRegime::Strong: return "i";
    case SignalRegime::Weak: return "ii";
    case SignalRegime::Varying: return "iii";
    case SignalRegime::Explicit: return "explicit";
  }
  return "?";
}

std::string_view to_string(ErrorScenario s) noexcept {
  return s == ErrorScenario::S1 ? "S1" : "S2";
}

SignalRegime parse_regime(std::string_view text) {
  if (text == "i" || text == "strong") return SignalRegime::Strong;
  if (text == "ii" || text == "weak") return SignalRegime::Weak;
  if (text == "iii" || text == "varying") return SignalRegime::Varying;
  if (text == "explicit") return SignalRegime::Explicit;
  throw_invalid("unknown signal regime `" + std::string(text) +
                "` (expected i, ii, iii or explicit)");
}

ErrorScenario parse_scenario(std::string_view text) {
  if (text == "S1" || text == "s1") return ErrorScenario::S1;
  if (text == "S2" || text == "s2") return ErrorScenario::S2;
  throw_invalid("unknown error scenario `" + std::string(text) +
                "` (expected S1 or S2)");
}

std::vector<double> regime_strengths(SignalRegime regime, Index p) {
  const double dp = static_cast<double>(p);
  const double r2 = std::sqrt(dp);
  const double r3 = std::cbrt(dp);
  const double r6 = std::pow(dp, 1.0 / 6.0);
  switch (regime) {
    case SignalRegime::Strong: return {6 * r2, 5 * r2, 4 * r2, 3 * r2};
    case SignalRegime::Weak: return {6 * r6, 5 * r6, 3 * r6, 3 * r6};
    case SignalRegime::Varying: return {3 * r3, 3 * r3, 3 * r6, 3 * r6};
    case SignalRegime::Explicit: break;
  }
  throw_invalid("explicit regime has no implied strengths");
}

std::vector<double> SimulationConfig::strengths() const {
  if (regime == SignalRegime::Explicit) return mu;
  return regime_strengths(regime, p);
}

void SimulationConfig::validate() const {
  if (n < 1 || p < 1) throw_invalid("n and p must be positive");
  if (K < 1) throw_invalid("K must be >= 1");
  if (K > std::min(n, p)) {
    throw_invalid("K=" + std::to_string(K) + " exceeds min(n, p)=" +
                  std::to_string(std::min(n, p)));
  }
  if (regime != SignalRegime::Explicit && K != 4) {
    throw_invalid("named signal regimes define exactly 4 factors; got K=" +
                  std::to_string(K) + " (use regime = explicit with mu)");
  }
  const auto s = strengths();
  if (static_cast<Index>(s.size()) != K) {
    throw_invalid("mu has " + std::to_string(s.size()) + " entries, K=" +
                  std::to_string(K));
  }
  for (double m : s) {
    if (!(m > 0.0) || !std::isfinite(m)) throw_invalid("every mu_j must be > 0");
  }
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    throw_invalid("noise_scale must be finite and >= 0");
  }
}

SimulationConfig parse_simulation_config(std::string_view text, std::string source) {
  auto kv = KeyValueConfig::parse(text, std::move(source));
  SimulationConfig cfg;
  if (auto v = kv.take_int("n")) cfg.n = *v;
  if (auto v = kv.take_int("p")) cfg.p = *v;
  if (auto v = kv.take_int("K")) cfg.K = *v;
  if (auto v = kv.take_string("regime")) cfg.regime = parse_regime(*v);
  if (auto v = kv.take_string("scenario")) cfg.scenario = parse_scenario(*v);
  if (auto v = kv.take_u64("seed")) cfg.seed = *v;
  if (auto v = kv.take_list("mu")) {
    cfg.mu.clear();
    for (const auto& item : *v) {
      double d = 0.0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), d);
      if (ec != std::errc() || ptr != item.data() + item.size()) {
        throw_invalid("mu entry `" + item + "` is not a number");
      }
      cfg.mu.push_back(d);
    }
  }
  if (auto v = kv.take_string("factors")) {
    if (*v == "unit") {
      cfg.unit_variance_factors = true;
    } else if (*v == "uniform") {
      cfg.unit_variance_factors = false;
    } else {
      throw_invalid("factors must be `unit` or `uniform`, got `" + *v + "`");
    }
  }
  if (auto v = kv.take_string("noise_scale")) {
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), cfg.noise_scale);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
      throw_invalid("noise_scale `" + *v + "` is not a number");
    }
  }
  kv.expect_consumed();
  cfg.validate();
  return cfg;
}

SimulationConfig load_simulation_config(const std::string& path) {
  return parse_simulation_config(read_text_file(path), path);
}

std::string to_config_text(const SimulationConfig& cfg) {
  std::ostringstream out;
  out << "n = " << cfg.n << '\n'
      << "p = " << cfg.p << '\n'
      << "K = " << cfg.K << '\n'
      << "regime = " << to_string(cfg.regime) << '\n'
      << "scenario = " << to_string(cfg.scenario) << '\n'
      << "seed = " << cfg.seed << '\n'
      << "factors = " << (cfg.unit_variance_factors ? "unit" : "uniform") << '\n';
  if (cfg.regime == SignalRegime::Explicit) {
    out << "mu = ";
    for (std::size_t j = 0; j < cfg.mu.size(); ++j) {
      out << (j ? ", " : "") << format_number(cfg.mu[j]);
    }
    out << '\n';
  }
  if (cfg.noise_scale != 1.0) {
    out << "noise_scale = " << format_number(cfg.noise_scale) << '\n';
  }
  return out.str();
}

Matrix random_orthonormal(Index rows, Index cols, Rng& rng) {
  Matrix z(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) z(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

Matrix gen_loadings(Index p, std::span<const double> mu, Rng& rng) {
  const Index k = static_cast<Index>(mu.size());
  if (k < 1) throw_invalid("gen_loadings: mu is empty");
  if (k > p) {
    throw_invalid("gen_loadings: K=" + std::to_string(k) + " exceeds p=" +
                  std::to_string(p));
  }
  for (double m : mu) {
    if (!(m > 0.0)) throw_invalid("gen_loadings: mu entries must be positive");
  }
  Matrix lambda = random_orthonormal(p, k, rng);
  for (Index j = 0; j < k; ++j) lambda.col(j) *= mu[static_cast<std::size_t>(j)];
  return lambda;
}

Matrix gen_factors(Index n, Index K, Rng& rng) {
  Matrix gamma(n, K);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < K; ++k) gamma(i, k) = rng.uniform(-0.5, 0.5);
  }
  return gamma;
}

Matrix gen_noise(Index n, Index p, ErrorScenario scenario, Rng& rng,
                 Rng& basis_rng) {
  Matrix e(n, p);
  if (scenario == ErrorScenario::S1) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < p; ++j) e(i, j) = rng.normal();
    }
    return e;
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) e(i, j) = rng.student_t(kStudentDof);
  }
  const Matrix q = random_orthonormal(n, n, basis_rng);
  Matrix out = q * e;
  const double dn = static_cast<double>(n);
  for (Index i = 0; i < n; ++i) out.row(i) *= static_cast<double>(i + 1) / dn;
  return out;
}

SimulatedDataset simulate_dataset(const SimulationConfig& cfg) {
  cfg.validate();
  Rng factor_rng = Rng::derive(cfg.seed, {stream::kFactors});
  Rng loading_rng = Rng::derive(cfg.seed, {stream::kLoadings});
  Rng noise_rng = Rng::derive(cfg.seed, {stream::kNoise});
  Rng basis_rng = Rng::derive(cfg.seed, {stream::kNoiseBasis});

  const auto mu = cfg.strengths();
  SimulatedDataset ds;
  ds.config = cfg;
  ds.loadings = gen_loadings(cfg.p, mu, loading_rng);
  ds.factors = gen_factors(cfg.n, cfg.K, factor_rng);
  if (cfg.unit_variance_factors) ds.factors *= std::sqrt(12.0);

  Matrix x = ds.factors * ds.loadings.transpose();
  if (cfg.noise_scale > 0.0) {
    x += cfg.noise_scale * gen_noise(cfg.n, cfg.p, cfg.scenario, noise_rng, basis_rng);
  }
  ds.x = DataMatrix(std::move(x), "sim:seed=" + std::to_string(cfg.seed));
  return ds;
}

}  // namespace factorstab
