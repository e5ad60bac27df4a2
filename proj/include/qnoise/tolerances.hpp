#pragma once

namespace qnoise {

// Every numerical slack used by the library lives here.
struct Tolerances {
  static constexpr double normalization = 1e-12;   // state norm / trace
  static constexpr double hermiticity = 1e-12;     // max |rho - rho^dagger|
  static constexpr double unitarity = 1e-12;       // max |U U^dagger - I|
  static constexpr double psd_floor = -1e-9;       // smallest admissible eigenvalue
  static constexpr double branch_cutoff = 1e-14;   // measurement branches below are dropped
  static constexpr double probability_slack = 1e-9;  // clamp window for p in [0,1]
  static constexpr double degenerate_probability = 1e-12;
  static constexpr double local_max_slack = 1e-12;  // plateau guard when locating maxima
  static constexpr double decomposability = 1e-8;   // GHZ-ensemble residual threshold
};

inline constexpr int kMaxQubits = 12;

}  // namespace qnoise
