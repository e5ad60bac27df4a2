#pragma once

#include <cstdint>
#include <random>

namespace qnoise {

/// Seedable uniform source shared by every sampled execution path.
///
/// std::uniform_real_distribution is implementation-defined, so doubles are
/// built directly from the top 53 bits of the engine output. Two runs with the
/// same seed consume the stream identically on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Draws outcome 0 with probability `p_zero`, consuming exactly one uniform.
inline int draw_binary(Rng& rng, double p_zero) { return rng.uniform() < p_zero ? 0 : 1; }

}  // namespace qnoise
