#pragma once

// The GHZ-based quantum average algorithm under preparation noise.
//
// Pipeline: noisy register -> GHZ preparation (H on qubit 1, CNOT fan-out)
// -> per-qubit phase shifts R(nu_j / (N theta)) -> sigma_x measurement of every
// qubit but the first -> parity-conditioned R(pi) on qubit 1 -> Hadamard and
// z readout of qubit 1. P(0) = cos^2(mu / 2 theta) in the noise-free case.
//
// Two register layouts are supported. In the original layout the N values sit
// on qubits 1..N and qubit 1 doubles as the readout. In the ruler layout a
// noise-free readout qubit 1 is added and the values sit on qubits 2..N+1.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qnoise/errors.hpp"
#include "qnoise/noise.hpp"
#include "qnoise/qstate.hpp"
#include "qnoise/rng.hpp"

namespace qnoise {

enum class Variant { original, ruler };

struct ExactMode {};

struct SampledMode {
  std::size_t alpha = 1;  // repetitions
  std::uint64_t seed = 0;
};

using ExecutionMode = std::variant<ExactMode, SampledMode>;
using NoiseSpec = std::variant<StaticNoiseSpec, WhiteNoiseSpec>;

inline double average_value(std::span<const double> values) {
  detail::require(!values.empty(), "value set is empty");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

struct AverageConfig {
  std::vector<double> values;
  double theta = 0.5;
  Variant variant = Variant::original;
  NoiseSpec noise = StaticNoiseSpec{};
  ExecutionMode mode = ExactMode{};

  int value_count() const { return static_cast<int>(values.size()); }
  int total_qubits() const { return value_count() + (variant == Variant::ruler ? 1 : 0); }
  double mean() const { return average_value(values); }
  double true_ratio() const { return std::abs(mean()) / theta; }

  void validate() const {
    detail::require(!values.empty(), "value set is empty");
    for (double v : values)
      detail::require(std::isfinite(v) && v >= -1.0 && v <= 1.0, "values must lie in [-1,1]");
    detail::require(std::isfinite(theta) && theta > 0.0, "theta must be positive");
    detail::require(total_qubits() >= 2, "the algorithm needs at least two qubits");
    detail::require(total_qubits() <= kMaxQubits, "register exceeds qubit cap");
    if (const auto* s = std::get_if<StaticNoiseSpec>(&noise)) {
      detail::require(static_cast<int>(s->size()) == value_count(),
                      "static noise needs one lambda per value-carrying qubit");
    } else {
      detail::require(std::get<WhiteNoiseSpec>(noise).qubits() == total_qubits(),
                      "white noise must cover the whole register");
    }
    if (const auto* s = std::get_if<SampledMode>(&mode)) detail::require(s->alpha >= 1, "alpha must be at least 1");
  }
};

struct AverageReport {
  double p_zero = 0;          // probability (or frequency) of readout 0
  double ratio_estimate = 0;  // |mu_noise| / theta
  double true_ratio = 0;      // |mu| / theta
  double fidelity = 0;        // F against the ideal readout state
  double distance_ratio = 0;  // D = (|mu_noise| - |mu|) / theta
  std::vector<std::size_t> parity_histogram;  // [even, odd]; sampled mode only
};

// ---------------------------------------------------------------------------
// Circuit stages
// ---------------------------------------------------------------------------

/// H on qubit 1, then CNOT(1 -> j) for j = 2..n in ascending order.
inline DensityMatrix ghz_prepare(const DensityMatrix& input) {
  const int n = input.qubits();
  detail::require(n >= 2, "GHZ preparation needs at least two qubits");
  DensityMatrix rho = apply_local(input, gates::hadamard(), {1});
  const Unitary cx = gates::cnot();
  for (int j = 2; j <= n; ++j) rho = apply_local(rho, cx, {1, j});
  return rho;
}

/// Qubit carrying value j (1-based) in the given layout.
inline int value_qubit(Variant variant, int j) { return variant == Variant::ruler ? j + 1 : j; }

/// R(nu_j / (N theta)) on every value-carrying qubit.
inline DensityMatrix phase_shift_stage(const DensityMatrix& rho, std::span<const double> values, double theta,
                                       Variant variant) {
  const int n_values = static_cast<int>(values.size());
  const int expected = n_values + (variant == Variant::ruler ? 1 : 0);
  detail::require(rho.qubits() == expected, "value count does not match the register layout");
  detail::require(theta > 0.0, "theta must be positive");
  DensityMatrix out = rho;
  for (int j = 1; j <= n_values; ++j) {
    const double angle = values[static_cast<std::size_t>(j - 1)] / (n_values * theta);
    out = apply_local(out, gates::phase_shift(angle), {value_qubit(variant, j)});
  }
  return out;
}

/// Noisy register after GHZ preparation, before any phase shift.
inline DensityMatrix prepared_resource(const AverageConfig& config) {
  config.validate();
  if (const auto* white = std::get_if<WhiteNoiseSpec>(&config.noise)) return white_noise_ghz(*white);
  DensityMatrix reg = static_register(std::get<StaticNoiseSpec>(config.noise));
  if (config.variant == Variant::ruler) reg = tensor(static_qubit(1.0), reg);
  return ghz_prepare(reg);
}

inline DensityMatrix phased_state(const AverageConfig& config) {
  return phase_shift_stage(prepared_resource(config), config.values, config.theta, config.variant);
}

/// (e^{i mu/theta}|0> + |1>)/sqrt(2).
inline PureState ideal_ruler_state(std::span<const double> values, double theta) {
  Vector a(2);
  a(0) = std::polar(1.0 / std::numbers::sqrt2, average_value(values) / theta);
  a(1) = 1.0 / std::numbers::sqrt2;
  return PureState(detail::TrustedTag{}, 1, std::move(a));
}

// ---------------------------------------------------------------------------
// Measurement, byproduct correction and readout
// ---------------------------------------------------------------------------

enum class ByproductCorrection { apply, skip };

struct Trajectory {
  std::vector<std::uint8_t> outcomes;  // one bit per measured qubit, in measurement order
  int parity = 0;
  int ruler_outcome = 0;
};

/// Every sigma_x outcome sequence on qubits 2..n, with conditional branch
/// probabilities at each level and the corrected readout state at each leaf.
class OutcomeTree {
 public:
  struct Leaf {
    std::vector<std::uint8_t> outcomes;
    double probability;
    DensityMatrix ruler;
    double ruler_p_zero;  // P(0) after the readout Hadamard
  };

  static OutcomeTree build(const DensityMatrix& rho, std::vector<int> order = {},
                           ByproductCorrection correction = ByproductCorrection::apply) {
    const int n = rho.qubits();
    detail::require(n >= 2, "measurement stage needs at least two qubits");
    if (order.empty())
      for (int q = 2; q <= n; ++q) order.push_back(q);
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      detail::require(sorted[i] == static_cast<int>(i) + 2, "measurement order must be a permutation of 2..n");

    OutcomeTree tree;
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::iota(labels.begin(), labels.end(), 1);
    std::vector<std::uint8_t> prefix;
    tree.expand(rho, labels, order, 0, prefix, 1.0, correction);
    return tree;
  }

  const std::vector<Leaf>& leaves() const { return leaves_; }

  /// Branch-weighted mixture of the corrected readout states.
  DensityMatrix ruler_mixture() const {
    Matrix m = Matrix::Zero(2, 2);
    for (const Leaf& leaf : leaves_) m += leaf.probability * leaf.ruler.matrix();
    return DensityMatrix(detail::TrustedTag{}, 1, std::move(m));
  }

  /// One trajectory: one uniform per measured qubit, then one for the readout.
  Trajectory sample(Rng& rng) const {
    Trajectory t;
    int node = 0;
    while (nodes_[static_cast<std::size_t>(node)].leaf < 0) {
      const Node& cur = nodes_[static_cast<std::size_t>(node)];
      int o = draw_binary(rng, cur.p_zero);
      if (cur.child[static_cast<std::size_t>(o)] < 0) o = 1 - o;
      t.outcomes.push_back(static_cast<std::uint8_t>(o));
      t.parity ^= o;
      node = cur.child[static_cast<std::size_t>(o)];
    }
    const Leaf& leaf = leaves_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(node)].leaf)];
    t.ruler_outcome = draw_binary(rng, leaf.ruler_p_zero);
    return t;
  }

 private:
  struct Node {
    double p_zero = 0;  // conditional probability of outcome 0 at this level
    std::array<int, 2> child{-1, -1};
    int leaf = -1;
  };

  int expand(const DensityMatrix& rho, std::vector<int> labels, const std::vector<int>& order, std::size_t depth,
             std::vector<std::uint8_t>& prefix, double weight, ByproductCorrection correction) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (depth == order.size()) {
      int parity = 0;
      for (auto b : prefix) parity ^= b;
      DensityMatrix ruler = rho;
      if (parity == 1 && correction == ByproductCorrection::apply)
        ruler = apply_local(ruler, gates::phase_shift(std::numbers::pi), {1});
      const double p0 = apply_local(ruler, gates::hadamard(), {1})(0, 0).real();
      nodes_[static_cast<std::size_t>(id)].leaf = static_cast<int>(leaves_.size());
      leaves_.push_back({prefix, weight, std::move(ruler), p0});
      return id;
    }
    const int label = order[depth];
    const auto pos_it = std::find(labels.begin(), labels.end(), label);
    const int position = static_cast<int>(pos_it - labels.begin()) + 1;
    const MeasurementResult result = measure_projective(rho, position, Basis::x);

    std::vector<int> keep;
    for (int p = 1; p <= static_cast<int>(labels.size()); ++p)
      if (p != position) keep.push_back(p);
    std::vector<int> next_labels = labels;
    next_labels.erase(next_labels.begin() + (position - 1));

    for (const MeasurementBranch& b : result.branches) {
      if (b.outcome == 0) nodes_[static_cast<std::size_t>(id)].p_zero = b.probability;
      prefix.push_back(static_cast<std::uint8_t>(b.outcome));
      const int child = expand(partial_trace(b.state, keep), next_labels, order, depth + 1, prefix,
                               weight * b.probability, correction);
      prefix.pop_back();
      nodes_[static_cast<std::size_t>(id)].child[static_cast<std::size_t>(b.outcome)] = child;
    }
    return id;
  }

  std::vector<Node> nodes_;
  std::vector<Leaf> leaves_;
};

/// sigma_x measurement of every qubit but the first, R(pi) on qubit 1 for odd
/// parity, and the probability-weighted mixture of the resulting readout states.
inline DensityMatrix measure_and_correct(const DensityMatrix& rho,
                                         ByproductCorrection correction = ByproductCorrection::apply,
                                         std::vector<int> order = {}) {
  return OutcomeTree::build(rho, std::move(order), correction).ruler_mixture();
}

/// P(0) after a Hadamard on the single readout qubit.
inline double ruler_readout(const DensityMatrix& ruler) {
  detail::require(ruler.qubits() == 1, "readout expects a single-qubit state");
  return apply_local(ruler, gates::hadamard(), {1})(0, 0).real();
}

/// 2 arccos(sqrt(p)) in [0, pi], the principal-branch estimate of |mu|/theta.
inline double estimate_ratio(double p_zero) {
  detail::require(p_zero >= -Tolerances::probability_slack && p_zero <= 1.0 + Tolerances::probability_slack,
                  "probability outside [0,1]");
  return 2.0 * std::acos(std::sqrt(std::clamp(p_zero, 0.0, 1.0)));
}

// ---------------------------------------------------------------------------
// Full runs
// ---------------------------------------------------------------------------

inline std::vector<Trajectory> sample_trajectories(const AverageConfig& config, std::size_t alpha,
                                                   std::uint64_t seed) {
  const OutcomeTree tree = OutcomeTree::build(phased_state(config));
  Rng rng(seed);
  std::vector<Trajectory> out;
  out.reserve(alpha);
  for (std::size_t i = 0; i < alpha; ++i) out.push_back(tree.sample(rng));
  return out;
}

inline AverageReport run_average(const AverageConfig& config) {
  const OutcomeTree tree = OutcomeTree::build(phased_state(config));
  const DensityMatrix ruler = tree.ruler_mixture();

  AverageReport report;
  report.true_ratio = config.true_ratio();

  const Unitary h = gates::hadamard();
  const PureState ideal_after_h = apply_local(ideal_ruler_state(config.values, config.theta), h, {1});
  report.fidelity = fidelity_with_pure(apply_local(ruler, h, {1}), ideal_after_h);

  if (const auto* sampled = std::get_if<SampledMode>(&config.mode)) {
    Rng rng(sampled->seed);
    std::size_t zeros = 0;
    report.parity_histogram.assign(2, 0);
    for (std::size_t i = 0; i < sampled->alpha; ++i) {
      const Trajectory t = tree.sample(rng);
      ++report.parity_histogram[static_cast<std::size_t>(t.parity)];
      if (t.ruler_outcome == 0) ++zeros;
    }
    report.p_zero = static_cast<double>(zeros) / static_cast<double>(sampled->alpha);
  } else {
    report.p_zero = ruler_readout(ruler);
  }
  report.ratio_estimate = estimate_ratio(report.p_zero);
  report.distance_ratio = report.ratio_estimate - report.true_ratio;
  return report;
}

// ---------------------------------------------------------------------------
// Order-of-magnitude search
// ---------------------------------------------------------------------------

struct HalvingOptions {
  double threshold = 0.5;  // ratio regarded as O(1)
  double initial_theta = 0.5;
  double divisor = 2.0;
  int max_applications = 64;
  Variant variant = Variant::original;
  double lambda = 1.0;  // symmetric static noise on the value-carrying qubits
  ExecutionMode mode = ExactMode{};
};

struct HalvingResult {
  double final_theta = 0;
  double ratio = 0;
  int applications = 0;
  bool zero_average = false;  // guard tripped without reaching the threshold

  double magnitude_estimate() const { return ratio * final_theta; }
};

/// Runs the algorithm at theta, theta/d, theta/d^2, ... until the estimated
/// ratio reaches the threshold.
inline HalvingResult theta_halving(const std::vector<double>& values, const HalvingOptions& options = {}) {
  detail::require(options.initial_theta > 0.0 && options.divisor > 1.0, "invalid halving schedule");
  detail::require(options.max_applications >= 1, "need at least one application");
  HalvingResult result;
  double theta = options.initial_theta;
  for (int k = 1; k <= options.max_applications; ++k) {
    AverageConfig config{values, theta, options.variant,
                         StaticNoiseSpec::uniform(values.size(), options.lambda), options.mode};
    if (auto* s = std::get_if<SampledMode>(&config.mode)) s->seed += static_cast<std::uint64_t>(k - 1);
    const AverageReport report = run_average(config);
    result = {theta, report.ratio_estimate, k, false};
    if (report.ratio_estimate >= options.threshold) return result;
    theta /= options.divisor;
  }
  result.zero_average = true;
  return result;
}

// ---------------------------------------------------------------------------
// Closed form for the ruler layout under symmetric static noise
// ---------------------------------------------------------------------------

struct SymmetricSum {
  int l = 0;  // sine factors
  int m = 0;  // cosine factors
  double value = 0;
};

/// Sum over all l-element index subsets S of prod_{j in S} sin(x_j) prod_{k not in S} cos(x_k),
/// with x_j = nu_j / (N theta), the phase each qubit actually receives.
inline SymmetricSum symmetric_sum(int l, std::span<const double> values, double theta) {
  const int n = static_cast<int>(values.size());
  detail::require(n >= 1 && n <= 24, "symmetric sum supports 1..24 values");
  detail::require(l >= 0 && l <= n, "sine count out of range");
  detail::require(theta > 0.0, "theta must be positive");
  std::vector<double> s(values.size()), c(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double x = values[j] / (n * theta);
    s[j] = std::sin(x);
    c[j] = std::cos(x);
  }
  double total = 0;
  const std::uint32_t limit = std::uint32_t{1} << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (std::popcount(mask) != l) continue;
    double term = 1.0;
    for (int j = 0; j < n; ++j) term *= (mask >> j) & 1 ? s[static_cast<std::size_t>(j)] : c[static_cast<std::size_t>(j)];
    total += term;
  }
  return {l, n - l, total};
}

/// sum_{i=0}^{floor(N/2)} (-1)^i tau^{2i} A^{(2i)}_{(N-2i)}; equals cos(mu/theta) at tau = 1.
inline double noisy_cosine_sum(PurityParameter tau, std::span<const double> values, double theta) {
  const int n = static_cast<int>(values.size());
  double total = 0;
  double tau_pow = 1.0;
  for (int i = 0; 2 * i <= n; ++i) {
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    total += sign * tau_pow * symmetric_sum(2 * i, values, theta).value;
    tau_pow *= tau.tau * tau.tau;
  }
  return total;
}

/// P(0) of the ruler layout with every value-carrying qubit at purity tau.
inline double analytic_p_zero(PurityParameter tau, std::span<const double> values, double theta) {
  detail::require(tau.tau >= 0.0 && tau.tau <= 1.0, "purity outside [0,1]");
  return 0.5 * (1.0 + noisy_cosine_sum(tau, values, theta));
}

// ---------------------------------------------------------------------------
// Worst-case value configurations and the tolerance scan
// ---------------------------------------------------------------------------

enum class ArgumentDomain {
  principal,    // common phase x in [0, pi/N], i.e. |mu|/theta in [0, pi]
  full_period,  // x in [0, pi]
};

struct WorstCaseOptions {
  ArgumentDomain domain = ArgumentDomain::principal;
  int grid_points = 2001;
  int max_refine_steps = 200;
  double refine_tolerance = 1e-12;
};

/// Cosine sum with every per-qubit phase equal to x.
inline double equal_phase_cosine_sum(int n, double tau, double x) {
  const std::vector<double> values(static_cast<std::size_t>(n), x * n);
  return noisy_cosine_sum({tau}, values, 1.0);
}

/// |S_tau(x) - S_1(x)| for a common per-qubit phase x.
inline double worst_case_objective(int n, double tau, double x) {
  return std::abs(equal_phase_cosine_sum(n, tau, x) - equal_phase_cosine_sum(n, 1.0, x));
}

inline double argument_upper_bound(int n, ArgumentDomain domain) {
  return domain == ArgumentDomain::principal ? std::numbers::pi / n : std::numbers::pi;
}

/// Common per-qubit phase maximizing worst_case_objective: grid search, then
/// golden-section refinement around the best grid point.
inline double worst_case_argument(int n, double tau, const WorstCaseOptions& options = {}) {
  detail::require(n >= 3 && n <= 8, "worst-case search supports 3..8 values");
  detail::require(tau >= 0.0 && tau <= 1.0, "purity outside [0,1]");
  detail::require(options.grid_points >= 3, "grid too coarse");
  const double hi = argument_upper_bound(n, options.domain);
  const auto f = [&](double x) { return worst_case_objective(n, tau, x); };

  const int g = options.grid_points;
  const double step = hi / (g - 1);
  int best = 0;
  double best_value = -1.0;
  for (int i = 0; i < g; ++i) {
    const double v = f(step * i);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double a = step * std::max(best - 1, 0);
  double b = step * std::min(best + 1, g - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int steps = 0;
  while (b - a > options.refine_tolerance * (1.0 + std::abs(a))) {
    if (++steps > options.max_refine_steps) throw NumericError("golden-section refinement did not converge");
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double refined = 0.5 * (a + b);
  return f(refined) >= best_value ? refined : step * best;
}

struct WorstCase {
  std::vector<double> taus;
  std::vector<double> arguments;  // argmax at each tau

  double argument() const { return arguments.back(); }
  double spread() const {
    const auto [lo, hi] = std::minmax_element(arguments.begin(), arguments.end());
    return *hi - *lo;
  }
};

/// The worst-case common phase for N values, evaluated across `taus` so the
/// caller can check how strongly it depends on the noise level.
inline WorstCase worst_case_values(int n, const std::vector<double>& taus = {0.3, 0.6, 0.9},
                                   const WorstCaseOptions& options = {}) {
  detail::require(!taus.empty(), "tau list is empty");
  WorstCase w;
  w.taus = taus;
  for (double t : taus) w.arguments.push_back(worst_case_argument(n, t, options));
  return w;
}

struct ToleranceRow {
  double tau = 0;
  double max_abs_d = 0;
  double argument = 0;  // worst-case common phase at this tau
};

struct ToleranceCurve {
  int n = 0;
  std::vector<ToleranceRow> rows;
};

/// |arccos S_tau(x*) - arccos S_1(x*)| at the worst-case phase x*.
inline double worst_case_distance(int n, double tau, double x) {
  const double noisy = std::acos(std::clamp(equal_phase_cosine_sum(n, tau, x), -1.0, 1.0));
  const double ideal = std::acos(std::clamp(equal_phase_cosine_sum(n, 1.0, x), -1.0, 1.0));
  return std::abs(noisy - ideal);
}

inline std::vector<ToleranceCurve> tolerance_scan(int n_min, int n_max, const std::vector<double>& tau_grid,
                                                  const WorstCaseOptions& options = {}) {
  detail::require(n_min >= 3 && n_max <= 8 && n_min <= n_max, "register sizes must lie in 3..8");
  detail::require(!tau_grid.empty(), "tau grid is empty");
  std::vector<ToleranceCurve> curves;
  for (int n = n_min; n <= n_max; ++n) {
    ToleranceCurve curve{n, {}};
    for (double tau : tau_grid) {
      const double x = worst_case_argument(n, tau, options);
      curve.rows.push_back({tau, worst_case_distance(n, tau, x), x});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

/// Purity above which max|D| stays below `level`, by linear interpolation
/// between the last grid point at or above the level and its successor.
inline std::optional<double> threshold_crossing(const ToleranceCurve& curve, double level = 0.5) {
  const auto& r = curve.rows;
  for (std::size_t k = r.size(); k-- > 1;) {
    if (r[k - 1].max_abs_d >= level && r[k].max_abs_d < level) {
      const double t = (r[k - 1].max_abs_d - level) / (r[k - 1].max_abs_d - r[k].max_abs_d);
      return r[k - 1].tau + t * (r[k].tau - r[k - 1].tau);
    }
  }
  return std::nullopt;
}

}  // namespace qnoise
