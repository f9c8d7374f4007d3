#pragma once

#include <factorstab/data_matrix.hpp>
#include <factorstab/rng.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace factorstab {

class KeyValueConfig;

/// Signal strength settings for K = 4 factors:
///   Strong  (i)   {6, 5, 4, 3} * p^{1/2}
///   Weak    (ii)  {6, 5, 3, 3} * p^{1/6}
///   Varying (iii) {3 p^{1/3}, 3 p^{1/3}, 3 p^{1/6}, 3 p^{1/6}}
/// Explicit takes the loading scales from SimulationConfig::mu.
enum class SignalRegime { Strong, Weak, Varying, Explicit };

/// S1: i.i.d. N(0,1) errors. S2: D Q E with E i.i.d. t(10), Q a random
/// n x n orthonormal matrix and D = diag(1/n, 2/n, ..., 1).
enum class ErrorScenario { S1, S2 };

std::string_view to_string(SignalRegime r) noexcept;
std::string_view to_string(ErrorScenario s) noexcept;
SignalRegime parse_regime(std::string_view text);
ErrorScenario parse_scenario(std::string_view text);

/// Loading scales mu_1..mu_4 of a named regime.
std::vector<double> regime_strengths(SignalRegime regime, Index p);

struct SimulationConfig {
  Index n = 500;
  Index p = 500;
  Index K = 4;
  SignalRegime regime = SignalRegime::Strong;
  std::vector<double> mu;  // only read for SignalRegime::Explicit
  ErrorScenario scenario = ErrorScenario::S1;
  std::uint64_t seed = 1;
  // Rescale the U[-0.5, 0.5] factor scores by sqrt(12) to unit variance.
  bool unit_variance_factors = true;
  // Multiplies the error term; 0 yields exactly rank-K data.
  double noise_scale = 1.0;

  /// Loading scales implied by the regime (or the explicit vector).
  std::vector<double> strengths() const;
  /// Throws InvalidInput on any violated invariant.
  void validate() const;
};

/// Reads the documented keys n, p, K, regime, scenario, seed (plus the
/// optional mu, factors, noise_scale) and rejects anything else.
SimulationConfig parse_simulation_config(std::string_view text,
                                         std::string source = "<config>");
SimulationConfig load_simulation_config(const std::string& path);
std::string to_config_text(const SimulationConfig& cfg);

struct SimulatedDataset {
  DataMatrix x;
  Matrix factors;   // n x K
  Matrix loadings;  // p x K
  SimulationConfig config;
};

/// Lambda = Q D with Q from the QR decomposition of a p x K standard normal
/// matrix and D = diag(mu).
Matrix gen_loadings(Index p, std::span<const double> mu, Rng& rng);

/// n x K matrix of i.i.d. U[-0.5, 0.5] scores.
Matrix gen_factors(Index n, Index K, Rng& rng);

/// Error matrix, already multiplied by D_eps Q_eps under S2. `basis_rng`
/// drives Q_eps and is untouched under S1.
Matrix gen_noise(Index n, Index p, ErrorScenario scenario, Rng& rng,
                 Rng& basis_rng);

/// Random n x n orthonormal matrix from the QR decomposition of a standard
/// normal matrix.
Matrix random_orthonormal(Index rows, Index cols, Rng& rng);

/// X = Gamma Lambda^T + noise, a pure function of the config (seed included).
SimulatedDataset simulate_dataset(const SimulationConfig& cfg);

}  // namespace factorstab
