#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cvr {

/// Seed of an independent named stream ("demand", "driver", "incident")
/// derived from the scenario seed. `sub` selects a sub-stream, e.g. one per
/// vehicle.
std::uint64_t derive_seed(std::uint64_t scenario_seed, std::string_view stream,
                          std::uint64_t sub = 0);

/// mt19937_64 with portable conversions (the std distributions are
/// implementation-defined, which would break cross-platform reproducibility).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cvr
