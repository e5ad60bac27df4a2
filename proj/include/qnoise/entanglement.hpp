#pragma once

// Entanglement in the prepared average-algorithm register (ruler layout):
// the GHZ-like ensemble behind static noise, PPT negativity scans, and the
// white-noise contrast.
//
// PPT is only a sufficient test for entanglement beyond 2x2 and 2x3 systems;
// zero negativity on larger cuts does not certify separability.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qnoise/average.hpp"
#include "qnoise/errors.hpp"
#include "qnoise/noise.hpp"
#include "qnoise/qstate.hpp"

namespace qnoise {

/// Bit string a_1..a_N selecting one member of the GHZ-like family.
class GhzLabel {
 public:
  explicit GhzLabel(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    detail::require(!bits_.empty(), "GHZ label is empty");
    detail::require(static_cast<int>(bits_.size()) < kMaxQubits, "GHZ label too long");
    for (auto b : bits_) detail::require(b <= 1, "GHZ label bits must be 0 or 1");
  }

  /// Label from the low `n` bits of `index`, a_1 being the most significant.
  static GhzLabel from_index(int n, std::uint64_t index) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) bits[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>((index >> (n - 1 - j)) & 1);
    return GhzLabel(std::move(bits));
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  int size() const { return static_cast<int>(bits_.size()); }
  std::uint64_t index() const {
    std::uint64_t v = 0;
    for (auto b : bits_) v = (v << 1) | b;
    return v;
  }
  std::string str() const {
    std::string s;
    for (auto b : bits_) s += static_cast<char>('0' + b);
    return s;
  }

  bool operator==(const GhzLabel&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// (|0 a_1..a_N> + |1 (1-a_1)..(1-a_N)>)/sqrt(2) on N+1 qubits.
inline PureState ghz_family_state(const GhzLabel& label) {
  const int n = label.size() + 1;
  const Eigen::Index d = Eigen::Index{1} << n;
  const auto a = static_cast<Eigen::Index>(label.index());
  const Eigen::Index low_mask = (Eigen::Index{1} << label.size()) - 1;
  Vector v = Vector::Zero(d);
  v(a) = 1.0 / std::numbers::sqrt2;
  v((d >> 1) | (~a & low_mask)) = 1.0 / std::numbers::sqrt2;
  return PureState(detail::TrustedTag{}, n, std::move(v));
}

struct GhzEnsemble {
  struct Term {
    double coefficient;
    GhzLabel label;
  };
  std::vector<Term> terms;

  double total_weight() const {
    double s = 0;
    for (const auto& t : terms) s += t.coefficient;
    return s;
  }
};

/// GHZ preparation of |0><0| (x) static_register(lambdas) as a GHZ-like mixture.
/// Label bit a_j = 0 carries lambda_j and a_j = 1 carries 1 - lambda_j.
/// Terms with an exactly zero coefficient are left out.
inline GhzEnsemble ensemble_decomposition(const std::vector<double>& lambdas) {
  const StaticNoiseSpec spec(lambdas);
  const int n = static_cast<int>(lambdas.size());
  detail::require(n >= 1 && n < kMaxQubits, "register size out of range");
  GhzEnsemble out;
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
    GhzLabel label = GhzLabel::from_index(n, idx);
    double c = 1.0;
    for (int j = 0; j < n; ++j) {
      const double l = lambdas[static_cast<std::size_t>(j)];
      c *= label.bits()[static_cast<std::size_t>(j)] == 0 ? l : 1.0 - l;
    }
    if (c != 0.0) out.terms.push_back({c, std::move(label)});
  }
  return out;
}

inline DensityMatrix reconstruct(const GhzEnsemble& ensemble) {
  detail::require(!ensemble.terms.empty(), "ensemble has no terms");
  const int n = ensemble.terms.front().label.size() + 1;
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix m = Matrix::Zero(d, d);
  for (const auto& t : ensemble.terms) {
    detail::require(t.label.size() + 1 == n, "ensemble labels differ in length");
    const Vector v = ghz_family_state(t.label).amplitudes();
    m += t.coefficient * (v * v.adjoint());
  }
  return DensityMatrix(detail::TrustedTag{}, n, std::move(m));
}

/// (1/N) sum_j (-1)^{a_j} nu_j, the average that a GHZ-like member estimates.
inline double modified_average(const GhzLabel& label, std::span<const double> values) {
  detail::require(static_cast<std::size_t>(label.size()) == values.size(), "label and value counts differ");
  double s = 0;
  for (std::size_t j = 0; j < values.size(); ++j) s += label.bits()[j] ? -values[j] : values[j];
  return s / static_cast<double>(values.size());
}

// ---------------------------------------------------------------------------
// Negativity scans
// ---------------------------------------------------------------------------

enum class NegativityMode { traced_ruler, traced_register, nontraced };

struct NegativityRow {
  double tau;
  std::string bipartition;  // qubit numbers of the full register, e.g. "2|3"
  double negativity;
};

/// Ruler-layout register after GHZ preparation, every register qubit at purity tau.
inline DensityMatrix prepared_ruler_register(int register_qubits, PurityParameter tau) {
  detail::require(register_qubits >= 1 && register_qubits < kMaxQubits, "register size out of range");
  const auto spec = StaticNoiseSpec::uniform(static_cast<std::size_t>(register_qubits), lambda_from_purity(tau));
  return ghz_prepare(tensor(static_qubit(1.0), static_register(spec)));
}

namespace detail {

/// Every single-qubit-vs-rest cut of `rho`, labelled with original qubit numbers.
inline void single_cuts(const DensityMatrix& rho, const std::vector<int>& names, double tau,
                        std::vector<NegativityRow>& rows) {
  const int n = rho.qubits();
  // a two-qubit state has only one cut
  const int cuts = n == 2 ? 1 : n;
  for (int q = 1; q <= cuts; ++q) {
    const Bipartition part = Bipartition::single(n, q);
    std::string label;
    for (int i : part.left()) label += std::to_string(names[static_cast<std::size_t>(i - 1)]);
    label += '|';
    for (int i : part.right()) label += std::to_string(names[static_cast<std::size_t>(i - 1)]);
    rows.push_back({tau, std::move(label), negativity(rho, part)});
  }
}

}  // namespace detail

/// Traced modes remove one qubit (the ruler, or each register qubit in turn)
/// and test the remainder; the nontraced mode tests every 1-vs-rest cut.
inline std::vector<NegativityRow> negativity_scan(int register_qubits, const std::vector<double>& tau_grid,
                                                  NegativityMode mode) {
  detail::require(register_qubits == 2 || register_qubits == 3, "negativity scans use 2 or 3 register qubits");
  detail::require(!tau_grid.empty(), "tau grid is empty");
  const int n = register_qubits + 1;
  std::vector<NegativityRow> rows;
  for (double t : tau_grid) {
    const DensityMatrix rho = prepared_ruler_register(register_qubits, {t});
    if (mode == NegativityMode::nontraced) {
      std::vector<int> names(static_cast<std::size_t>(n));
      std::iota(names.begin(), names.end(), 1);
      detail::single_cuts(rho, names, t, rows);
      continue;
    }
    const int first = mode == NegativityMode::traced_ruler ? 1 : 2;
    const int last = mode == NegativityMode::traced_ruler ? 1 : n;
    for (int removed = first; removed <= last; ++removed) {
      std::vector<int> keep;
      for (int q = 1; q <= n; ++q)
        if (q != removed) keep.push_back(q);
      detail::single_cuts(partial_trace(rho, keep), keep, t, rows);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// GHZ-ensemble decomposability and the white-noise contrast
// ---------------------------------------------------------------------------

struct Decomposability {
  double residual;  // Frobenius norm of rho minus its projection on the family span
  bool decomposable;
};

/// Least-squares projection onto span{|GHZ_a><GHZ_a|}. The family projectors are
/// Hilbert-Schmidt orthonormal, so the coefficients are c_a = <GHZ_a|rho|GHZ_a>.
inline Decomposability ghz_decomposability(const DensityMatrix& rho) {
  const int n = rho.qubits();
  detail::require(n >= 2, "decomposability needs at least two qubits");
  Matrix fit = Matrix::Zero(rho.dimension(), rho.dimension());
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << (n - 1)); ++idx) {
    const Vector v = ghz_family_state(GhzLabel::from_index(n - 1, idx)).amplitudes();
    const double c = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    fit += c * (v * v.adjoint());
  }
  const double r = (rho.matrix() - fit).norm();
  return {r, r <= Tolerances::decomposability};
}

struct WhiteNoiseRow {
  double tau_tilde;
  double distance_ratio;
  double residual;
  bool decomposable;
};

/// Ruler-layout run on tau_tilde |GHZ><GHZ| + (1 - tau_tilde) I / 2^{N+1}.
inline std::vector<WhiteNoiseRow> white_noise_contrast(const std::vector<double>& values, double theta,
                                                       const std::vector<double>& tau_tilde_grid) {
  detail::require(!tau_tilde_grid.empty(), "tau grid is empty");
  const int n = static_cast<int>(values.size()) + 1;
  std::vector<WhiteNoiseRow> rows;
  for (double t : tau_tilde_grid) {
    const WhiteNoiseSpec spec(t, n);
    const AverageConfig config{values, theta, Variant::ruler, spec, ExactMode{}};
    const AverageReport report = run_average(config);
    const Decomposability dec = ghz_decomposability(white_noise_ghz(spec));
    rows.push_back({t, report.distance_ratio, dec.residual, dec.decomposable});
  }
  return rows;
}

struct FragilityPair {
  int n = 0;
  double purity = 0;
  double worst_phase = 0;        // common per-qubit phase of the static worst case
  double static_max_abs_d = 0;   // ruler layout, static noise
  double white_abs_d = 0;        // same values, white noise at tau_tilde = purity
};

/// Static and white noise at matched purity on the static worst-case values.
/// Both sides are full density-matrix runs; the values are all 1 and theta is
/// chosen so that every qubit receives the worst-case phase.
inline FragilityPair paired_fragility(int n, double purity, const WorstCaseOptions& options = {}) {
  FragilityPair p;
  p.n = n;
  p.purity = purity;
  p.worst_phase = worst_case_argument(n, purity, options);
  detail::require(p.worst_phase > 0.0, "worst-case phase vanishes");
  const std::vector<double> values(static_cast<std::size_t>(n), 1.0);
  const double theta = 1.0 / (n * p.worst_phase);

  const AverageConfig noisy{values, theta, Variant::ruler,
                            StaticNoiseSpec::uniform(static_cast<std::size_t>(n), lambda_from_purity({purity})),
                            ExactMode{}};
  p.static_max_abs_d = std::abs(run_average(noisy).distance_ratio);

  const AverageConfig white{values, theta, Variant::ruler, WhiteNoiseSpec(purity, n + 1), ExactMode{}};
  p.white_abs_d = std::abs(run_average(white).distance_ratio);
  return p;
}

}  // namespace qnoise
