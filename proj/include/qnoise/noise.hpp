#pragma once

// Noisy initial registers: per-qubit static mixtures and white-noise GHZ.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qnoise/errors.hpp"
#include "qnoise/qstate.hpp"

namespace qnoise {

namespace detail {

inline void check_probability(double lambda) {
  require(std::isfinite(lambda) && lambda >= 0.0 && lambda <= 1.0,
          "noise parameter " + std::to_string(lambda) + " outside [0,1]");
}

}  // namespace detail

/// Ground-state probabilities lambda_j, one per noisy qubit.
class StaticNoiseSpec {
 public:
  StaticNoiseSpec() = default;
  explicit StaticNoiseSpec(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
    for (double l : lambdas_) detail::check_probability(l);
  }

  static StaticNoiseSpec uniform(std::size_t count, double lambda) {
    return StaticNoiseSpec(std::vector<double>(count, lambda));
  }

  const std::vector<double>& lambdas() const { return lambdas_; }
  std::size_t size() const { return lambdas_.size(); }

 private:
  std::vector<double> lambdas_;
};

/// tau_tilde |GHZ><GHZ| + (1 - tau_tilde) I / 2^n.
class WhiteNoiseSpec {
 public:
  WhiteNoiseSpec(double tau_tilde, int n) : tau_tilde_(tau_tilde), n_(n) {
    detail::check_probability(tau_tilde);
    detail::require(n >= 1 && n <= kMaxQubits, "white-noise register size out of range");
  }

  double tau_tilde() const { return tau_tilde_; }
  int qubits() const { return n_; }

 private:
  double tau_tilde_;
  int n_;
};

/// tau = |2 lambda - 1|; 1 is a pure preparation, 0 a maximally mixed one.
struct PurityParameter {
  double tau;
};

inline DensityMatrix static_qubit(double lambda) {
  detail::check_probability(lambda);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = lambda;
  m(1, 1) = 1.0 - lambda;
  return DensityMatrix(detail::TrustedTag{}, 1, std::move(m));
}

/// Product of static_qubit states; diagonal with p_b = prod lambda^(1-b)(1-lambda)^b.
inline DensityMatrix static_register(const StaticNoiseSpec& spec) {
  const auto& ls = spec.lambdas();
  detail::require(!ls.empty(), "static noise spec is empty");
  detail::require(static_cast<int>(ls.size()) <= kMaxQubits, "static register exceeds qubit cap");
  const int n = static_cast<int>(ls.size());
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double p = 1.0;
    for (int q = 1; q <= n; ++q) {
      const bool one = (i >> detail::bit_of(n, q)) & 1;
      const double l = ls[static_cast<std::size_t>(q - 1)];
      p *= one ? 1.0 - l : l;
    }
    m(i, i) = p;
  }
  return DensityMatrix(detail::TrustedTag{}, n, std::move(m));
}

inline PurityParameter purity_from_lambda(double lambda) {
  detail::check_probability(lambda);
  return {std::abs(2.0 * lambda - 1.0)};
}

/// The lambda >= 1/2 preimage of tau.
inline double lambda_from_purity(PurityParameter tau) {
  detail::check_probability(tau.tau);
  return 0.5 * (1.0 + tau.tau);
}

/// (|0...0> + |1...1>)/sqrt(2) on n qubits.
inline PureState ghz_state(int n) {
  detail::require(n >= 1 && n <= kMaxQubits, "GHZ size out of range");
  const Eigen::Index d = Eigen::Index{1} << n;
  Vector a = Vector::Zero(d);
  a(0) = a(d - 1) = 1.0 / std::numbers::sqrt2;
  return PureState(detail::TrustedTag{}, n, std::move(a));
}

inline DensityMatrix white_noise_ghz(const WhiteNoiseSpec& spec) {
  const int n = spec.qubits();
  const double t = spec.tau_tilde();
  const Eigen::Index d = Eigen::Index{1} << n;
  const Vector g = ghz_state(n).amplitudes();
  Matrix m = t * (g * g.adjoint()) + ((1.0 - t) / static_cast<double>(d)) * Matrix::Identity(d, d);
  return DensityMatrix(detail::TrustedTag{}, n, std::move(m));
}

/// `count` evenly spaced points on [lo, hi], endpoints included.
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t count = 101) {
  detail::require(count >= 1, "grid needs at least one point");
  detail::require(lo <= hi, "grid bounds reversed");
  if (count == 1) return {lo};
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

}  // namespace qnoise
