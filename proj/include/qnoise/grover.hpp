#pragma once

// Grover search on a register prepared with static noise.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "qnoise/errors.hpp"
#include "qnoise/noise.hpp"
#include "qnoise/qstate.hpp"

namespace qnoise {

struct GroverConfig {
  int n = 2;
  std::uint64_t searched = 0;
  StaticNoiseSpec noise;
  int max_iterations = 10;

  void validate() const {
    detail::require(n >= 1 && n <= kMaxQubits, "Grover register size out of range");
    detail::require(searched < (std::uint64_t{1} << n), "searched index out of range");
    detail::require(noise.size() == static_cast<std::size_t>(n), "noise spec length differs from register size");
    detail::require(max_iterations >= 0, "iteration count must be non-negative");
  }
};

struct GroverCurve {
  std::vector<double> probabilities;  // P(m), m = 0..max_iterations
  std::optional<int> first_max_iteration;  // first local maximum of the ideal curve
  double p_ideal_at_max = 0;
};

/// H^{(x)n}|0>: every amplitude 2^{-n/2}.
inline PureState uniform_superposition(int n) {
  detail::require(n >= 1 && n <= kMaxQubits, "qubit count out of range");
  const Eigen::Index d = Eigen::Index{1} << n;
  return PureState(detail::TrustedTag{}, n, Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))));
}

/// I - 2|s><s|.
inline Unitary oracle_operator(int n, std::uint64_t searched) {
  detail::require(n >= 1 && n <= kMaxQubits, "qubit count out of range");
  const Eigen::Index d = Eigen::Index{1} << n;
  detail::require(searched < static_cast<std::uint64_t>(d), "searched index out of range");
  Matrix o = Matrix::Identity(d, d);
  o(static_cast<Eigen::Index>(searched), static_cast<Eigen::Index>(searched)) = -1.0;
  return Unitary(detail::TrustedTag{}, n, std::move(o));
}

/// 2|0~><0~| - I, the inversion about the mean.
inline Unitary diffusion_operator(int n) {
  const Vector u = uniform_superposition(n).amplitudes();
  const Eigen::Index d = u.size();
  return Unitary(detail::TrustedTag{}, n, 2.0 * (u * u.adjoint()) - Matrix::Identity(d, d));
}

/// X = arccos(sqrt(1/L)) / (2 arccos(sqrt((L-1)/L))).
inline double optimal_iterations_real(std::uint64_t database_size) {
  detail::require(database_size >= 2, "database size must be at least 2");
  const double l = static_cast<double>(database_size);
  return std::acos(std::sqrt(1.0 / l)) / (2.0 * std::acos(std::sqrt((l - 1.0) / l)));
}

/// Closest integer to X.
inline int optimal_iterations(std::uint64_t database_size) {
  return static_cast<int>(std::lround(optimal_iterations_real(database_size)));
}

namespace detail {

/// First m >= 1 with P(m) > P(m-1) and P(m) >= P(m+1).
inline std::optional<int> first_local_max(const std::vector<double>& p) {
  for (std::size_t m = 1; m + 1 < p.size(); ++m)
    if (p[m] > p[m - 1] + Tolerances::local_max_slack && p[m] + Tolerances::local_max_slack >= p[m + 1])
      return static_cast<int>(m);
  return std::nullopt;
}

/// Noise-free curve from pure-state evolution.
inline std::vector<double> ideal_grover_probabilities(int n, std::uint64_t searched, int iterations) {
  const auto s = static_cast<Eigen::Index>(searched);
  Vector psi = uniform_superposition(n).amplitudes();
  const Vector u = psi;
  std::vector<double> p{std::norm(psi(s))};
  for (int m = 0; m < iterations; ++m) {
    psi(s) = -psi(s);
    const complex overlap = u.dot(psi);
    psi = 2.0 * overlap * u - psi;
    p.push_back(std::norm(psi(s)));
  }
  return p;
}

/// Enough iterations to see the first maximum and the sample after it.
inline int iterations_to_first_max(int n) {
  return optimal_iterations(std::uint64_t{1} << n) + 3;
}

}  // namespace detail

/// P(m) = <s|rho_m|s>, rho_0 = H^n static_register H^n, one oracle + diffusion per step.
inline GroverCurve run_grover(const GroverConfig& config) {
  config.validate();
  const int n = config.n;
  const auto s = static_cast<Eigen::Index>(config.searched);

  DensityMatrix rho = apply_global(static_register(config.noise), tensor_power(gates::hadamard(), n));
  const Matrix iterate = diffusion_operator(n).matrix() * oracle_operator(n, config.searched).matrix();

  GroverCurve curve;
  curve.probabilities.reserve(static_cast<std::size_t>(config.max_iterations) + 1);
  curve.probabilities.push_back(rho(s, s).real());
  Matrix m = rho.matrix();
  for (int k = 0; k < config.max_iterations; ++k) {
    m = iterate * m * iterate.adjoint();
    curve.probabilities.push_back(m(s, s).real());
  }

  const int horizon = std::max(config.max_iterations, detail::iterations_to_first_max(n));
  const auto ideal = detail::ideal_grover_probabilities(n, config.searched, horizon);
  curve.first_max_iteration = detail::first_local_max(ideal);
  if (curve.first_max_iteration) curve.p_ideal_at_max = ideal[static_cast<std::size_t>(*curve.first_max_iteration)];
  return curve;
}

/// P / P_ideal, both taken at the first maximum of the ideal curve.
inline double normalized_probability(int n, std::uint64_t searched, const StaticNoiseSpec& noise) {
  GroverConfig config{n, searched, noise, detail::iterations_to_first_max(n)};
  const GroverCurve curve = run_grover(config);
  if (!curve.first_max_iteration || curve.p_ideal_at_max < Tolerances::degenerate_probability)
    throw DegenerateConfigError("ideal success probability vanishes at the first maximum");
  return curve.probabilities[static_cast<std::size_t>(*curve.first_max_iteration)] / curve.p_ideal_at_max;
}

struct PeriodScanRow {
  double lambda;
  std::optional<int> argmax;  // nullopt for a flat (maximally mixed) curve
};

/// Location of the first maximum of P(m) for each symmetric noise level.
inline std::vector<PeriodScanRow> period_invariance_scan(int n, std::uint64_t searched,
                                                         const std::vector<double>& lambda_grid) {
  detail::require(!lambda_grid.empty(), "lambda grid is empty");
  std::vector<PeriodScanRow> rows;
  for (double lambda : lambda_grid) {
    detail::require(lambda > 0.0 && lambda <= 1.0, "period scan lambdas must lie in (0,1]");
    if (std::abs(lambda - 0.5) < Tolerances::local_max_slack) {
      rows.push_back({lambda, std::nullopt});
      continue;
    }
    GroverConfig config{n, searched, StaticNoiseSpec::uniform(static_cast<std::size_t>(n), lambda),
                        detail::iterations_to_first_max(n)};
    rows.push_back({lambda, detail::first_local_max(run_grover(config).probabilities)});
  }
  return rows;
}

}  // namespace qnoise
