#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace factorstab {

/// SplitMix64 finalizer; used to turn (seed, path) tuples into stream keys.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Folds a path of integers into a seed. Distinct paths give statistically
/// independent streams, so replications and splits never share state.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) noexcept;

/// Deterministic random stream. Variates are produced from the raw 64-bit
/// engine output with fixed algorithms so results are bitwise reproducible
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  static Rng derive(std::uint64_t master,
                    std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(master, path));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Student-t with integer degrees of freedom.
  double student_t(int dof);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream tags. Values are part of the on-disk reproducibility contract.
namespace stream {
inline constexpr std::uint64_t kFactors = 0x46414354;     // "FACT"
inline constexpr std::uint64_t kLoadings = 0x4c4f4144;    // "LOAD"
inline constexpr std::uint64_t kNoise = 0x4e4f4953;       // "NOIS"
inline constexpr std::uint64_t kNoiseBasis = 0x51455053;  // "QEPS"
inline constexpr std::uint64_t kSplits = 0x53504c54;      // "SPLT"
inline constexpr std::uint64_t kReplication = 0x52455053; // "REPS"
inline constexpr std::uint64_t kSubsample = 0x53554253;   // "SUBS"
}  // namespace stream

}  // namespace factorstab
