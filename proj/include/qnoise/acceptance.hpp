#pragma once

// Machine-checkable acceptance suite: fourteen named criteria, each with its
// tolerance and wall-clock limit. Shared by the test binary and the CLI.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qnoise/average.hpp"
#include "qnoise/dist.hpp"
#include "qnoise/entanglement.hpp"
#include "qnoise/grover.hpp"

namespace qnoise {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  double limit_seconds = 0;  // 0: no limit
};

struct AcceptanceOptions {
  std::set<int> only;                  // empty: all criteria
  double lambda_law_tolerance = 0.02;  // overridable so the harness can be shown to fail
};

namespace acceptance {

using Detail = std::ostringstream;

inline std::string format_tau(double t) {
  std::ostringstream os;
  os.precision(4);
  os << t;
  return os.str();
}

inline const std::vector<double> kFigureValues{-0.775, 0.25, 0.675};
inline constexpr double kFigureTheta = 0.0625;

inline AverageReport figure_run(Variant variant, double lambda, const std::vector<double>& values = kFigureValues) {
  return run_average({values, kFigureTheta, variant, StaticNoiseSpec::uniform(values.size(), lambda), ExactMode{}});
}

inline bool c01_period_invariance(Detail& d) {
  bool ok = true;
  for (int n : {2, 3, 4}) {
    const auto rows = period_invariance_scan(n, 0, {0.6, 0.7, 0.8, 0.9, 1.0});
    d << "n=" << n << ":";
    for (const auto& r : rows) {
      d << ' ' << (r.argmax ? std::to_string(*r.argmax) : "-");
      ok = ok && r.argmax && r.argmax == rows.front().argmax;
    }
    d << "; ";
  }
  return ok;
}

inline bool c02_lambda_law(Detail& d, double tolerance) {
  Rng rng(20240602);
  double worst2 = 0, worst = 0;
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> ls(static_cast<std::size_t>(n));
      double prod = 1.0;
      for (auto& l : ls) {
        l = 0.6 + 0.4 * rng.uniform();
        prod *= l;
      }
      const auto searched = rng.next() % (std::uint64_t{1} << n);
      const double err = std::abs(normalized_probability(n, searched, StaticNoiseSpec(ls)) - prod);
      (n == 2 ? worst2 : worst) = std::max(n == 2 ? worst2 : worst, err);
    }
  }
  d << "max err n=2: " << worst2 << ", n=3,4: " << worst << " (tol " << tolerance << ")";
  return worst2 <= 1e-12 && worst <= tolerance;
}

inline bool c03_optimal_iterations(Detail& d) {
  bool ok = optimal_iterations(4) == 1 && optimal_iterations(16) == 3;
  d << "R(4)=" << optimal_iterations(4) << " R(16)=" << optimal_iterations(16);
  for (int k : {10, 12}) {
    const std::uint64_t l = std::uint64_t{1} << k;
    const long approx = std::lround(std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(l)));
    d << " R(2^" << k << ")=" << optimal_iterations(l) << " vs " << approx;
    ok = ok && std::abs(optimal_iterations(l) - approx) <= 1;
  }
  return ok;
}

inline bool c04_headline_numbers(Detail& d) {
  const AverageReport a = figure_run(Variant::original, 0.0);
  const AverageReport b = figure_run(Variant::original, 0.1);
  d << "lambda=0: F=" << a.fidelity << " ratio=" << a.ratio_estimate << "; lambda=0.1: F=" << b.fidelity
    << " ratio=" << b.ratio_estimate;
  return std::abs(a.fidelity - 0.95) <= 0.02 && std::abs(a.ratio_estimate - 0.36) <= 0.02 &&
         std::abs(b.fidelity - 0.77) <= 0.02 && std::abs(b.ratio_estimate - 0.94) <= 0.02;
}

inline bool c05_ranking_inversion(Detail& d) {
  const AverageReport a = figure_run(Variant::original, 0.0);
  const AverageReport b = figure_run(Variant::original, 0.1);
  d << "F: " << a.fidelity << " > " << b.fidelity << "; |D|: " << std::abs(a.distance_ratio) << " > "
    << std::abs(b.distance_ratio);
  return a.fidelity > b.fidelity && std::abs(a.distance_ratio) > std::abs(b.distance_ratio);
}

inline bool c06_swap_sensitivity(Detail& d) {
  auto swapped = kFigureValues;
  std::swap(swapped[0], swapped[1]);
  double diff_original = 0, diff_ruler = 0;
  for (double l : uniform_grid(0.0, 1.0, 101)) {
    diff_original = std::max(diff_original, std::abs(figure_run(Variant::original, l).distance_ratio -
                                                     figure_run(Variant::original, l, swapped).distance_ratio));
    diff_ruler = std::max(diff_ruler, std::abs(figure_run(Variant::ruler, l).distance_ratio -
                                               figure_run(Variant::ruler, l, swapped).distance_ratio));
  }
  d << "max |dD| original=" << diff_original << " ruler=" << diff_ruler;
  return diff_original > 0.05 && diff_ruler <= 1e-12;
}

inline bool c07_ruler_exactness(Detail& d) {
  const double d0 = figure_run(Variant::ruler, 0.0).distance_ratio;
  const double d1 = figure_run(Variant::ruler, 1.0).distance_ratio;
  const int n = static_cast<int>(kFigureValues.size()) + 1;
  const DensityMatrix flipped_prep = ghz_prepare(
      tensor(static_qubit(1.0), static_register(StaticNoiseSpec::uniform(kFigureValues.size(), 0.0))));
  const DensityMatrix ghz = DensityMatrix::from_pure(ghz_state(n));
  const double err = detail::max_abs(flipped_prep.matrix() - apply_local(ghz, gates::pauli_x(), {1}).matrix());
  d << "D(0)=" << d0 << " D(1)=" << d1 << " |Psi'-X1 Psi|=" << err;
  return std::abs(d0) <= 1e-9 && std::abs(d1) <= 1e-9 && err <= 1e-12;
}

inline bool c08_analytic_cross_check(Detail& d) {
  Rng rng(8);
  double worst = 0;
  for (int n = 3; n <= 6; ++n)
    for (int set = 0; set < 20; ++set) {
      std::vector<double> values(static_cast<std::size_t>(n));
      for (auto& v : values) v = 2.0 * rng.uniform() - 1.0;
      const double theta = 0.05 + 0.95 * rng.uniform();
      for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double sim = run_average({values, theta, Variant::ruler,
                                        StaticNoiseSpec::uniform(values.size(), lambda_from_purity({tau})),
                                        ExactMode{}})
                               .p_zero;
        worst = std::max(worst, std::abs(sim - analytic_p_zero({tau}, values, theta)));
      }
    }
  double worst_boundary = 0;
  for (int n = 3; n <= 8; ++n)
    for (int set = 0; set < 20; ++set) {
      std::vector<double> values(static_cast<std::size_t>(n));
      for (auto& v : values) v = 2.0 * rng.uniform() - 1.0;
      const double theta = 0.05 + 0.95 * rng.uniform();
      const double c = std::cos(average_value(values) / (2.0 * theta));
      worst_boundary = std::max(worst_boundary, std::abs(analytic_p_zero({1.0}, values, theta) - c * c));
    }
  d << "max |analytic - simulated| = " << worst << ", boundary identity err = " << worst_boundary;
  return worst <= 1e-9 && worst_boundary <= 1e-10;
}

inline bool c09_resilience_threshold(Detail& d) {
  const auto curves = tolerance_scan(3, 8, uniform_grid(0.0, 1.0, 101));
  bool crossings = true, monotone = true, ordered = true;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const auto star = threshold_crossing(c);
    d << "N=" << c.n << " tau*=" << (star ? format_tau(*star) : std::string("none")) << "; ";
    crossings = crossings && star && *star >= 0.88 && *star <= 0.92;
    for (std::size_t k = 1; k < c.rows.size(); ++k)
      monotone = monotone && c.rows[k].max_abs_d <= c.rows[k - 1].max_abs_d + 1e-12;
    // larger registers lie above smaller ones
    if (i > 0)
      for (std::size_t k = 0; k < c.rows.size(); ++k)
        ordered = ordered && c.rows[k].max_abs_d + 1e-12 >= curves[i - 1].rows[k].max_abs_d;
  }
  d << "crossings in [0.88,0.92]: " << (crossings ? "yes" : "no") << ", monotone: " << (monotone ? "yes" : "no")
    << ", ordered by N: " << (ordered ? "yes" : "no");
  return crossings && monotone && ordered;
}

inline bool c10_entanglement_structure(Detail& d) {
  const auto grid = uniform_grid(0.0, 1.0, 21);
  double traced = 0;
  for (auto mode : {NegativityMode::traced_ruler, NegativityMode::traced_register})
    for (const auto& r : negativity_scan(2, grid, mode)) traced = std::max(traced, r.negativity);
  double min_positive = 1.0, at_zero = 0;
  for (const auto& r : negativity_scan(2, grid, NegativityMode::nontraced)) {
    if (r.tau == 0.0) at_zero = std::max(at_zero, r.negativity);
    else min_positive = std::min(min_positive, r.negativity);
  }
  Rng rng(10);
  double recon = 0;
  for (int n : {2, 3})
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> ls(static_cast<std::size_t>(n));
      for (auto& l : ls) l = rng.uniform();
      const DensityMatrix direct = ghz_prepare(tensor(static_qubit(1.0), static_register(StaticNoiseSpec(ls))));
      recon = std::max(recon, detail::max_abs(reconstruct(ensemble_decomposition(ls)).matrix() - direct.matrix()));
    }
  d << "traced max=" << traced << " nontraced min(tau>0)=" << min_positive << " at tau=0: " << at_zero
    << " reconstruction err=" << recon;
  return traced < 1e-10 && min_positive > 0.0 && at_zero <= 1e-10 && recon <= 1e-11;
}

inline bool c11_white_noise_fragility(Detail& d) {
  bool ok = true;
  for (int n = 3; n <= 8; ++n) {
    const FragilityPair p = paired_fragility(n, 0.9);
    d << "N=" << n << " white=" << p.white_abs_d << " static=" << p.static_max_abs_d << "; ";
    ok = ok && p.white_abs_d > p.static_max_abs_d;
  }
  return ok;
}

inline bool c12_sampled_consistency(Detail& d) {
  const std::size_t alpha = 100000;
  const double band = 4.0 / std::sqrt(static_cast<double>(alpha));
  AverageConfig config{kFigureValues, kFigureTheta, Variant::original,
                       StaticNoiseSpec::uniform(kFigureValues.size(), 0.1), ExactMode{}};
  const double exact = run_average(config).p_zero;
  int outside = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    config.mode = SampledMode{alpha, seed};
    if (std::abs(run_average(config).p_zero - exact) > band) ++outside;
  }
  d << outside << " of 20 seeds outside 4/sqrt(alpha)";
  return outside <= 1;
}

inline bool c13_distributed_equivalence(Detail& d) {
  const std::size_t alpha = 2000;
  bool ok = true;
  Rng values_rng(13);
  for (int n : {3, 5}) {
    std::vector<double> values(static_cast<std::size_t>(n));
    for (auto& v : values) v = 2.0 * values_rng.uniform() - 1.0;
    const DistributedConfig dc{values, 0.25, Variant::ruler, StaticNoiseSpec::uniform(values.size(), 0.85)};
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const DistributedReport dist = run_distributed_experiment(dc, alpha, seed);
      const auto mono = sample_trajectories(dc.average_config(), alpha, seed);
      std::size_t mismatches = 0;
      for (std::size_t i = 0; i < alpha; ++i) {
        const auto& t = dist.transcripts[i];
        if (t.bits_by_sender() != mono[i].outcomes || t.parity != mono[i].parity ||
            t.ruler_outcome != mono[i].ruler_outcome)
          ++mismatches;
      }
      AverageConfig sampled = dc.average_config();
      sampled.mode = SampledMode{alpha, seed};
      const bool same_estimate = run_average(sampled).p_zero == dist.report.p_zero;
      const bool traffic = dist.classical_bits == alpha * static_cast<std::size_t>(n);
      if (mismatches || !same_estimate || !traffic) {
        ok = false;
        d << "N=" << n << " seed=" << seed << " mismatches=" << mismatches << " bits=" << dist.classical_bits << "; ";
      }
    }
  }
  if (ok) d << "N=3,5 x 3 seeds, alpha=" << alpha << ": transcripts identical, traffic alpha*N bits";
  return ok;
}

inline bool c14_theta_halving(Detail& d) {
  bool ok = true;
  for (int k : {2, 4, 6}) {
    const double mu = std::ldexp(1.0, -k);
    const HalvingResult r = theta_halving({mu, mu, mu});
    const int bound = static_cast<int>(std::ceil(std::log2(0.5 / mu))) + 1;
    d << "mu=2^-" << k << ": " << r.applications << " (bound " << bound << "); ";
    ok = ok && !r.zero_average && r.applications <= bound;
  }
  return ok;
}

}  // namespace acceptance

namespace acceptance {

struct Entry {
  int id;
  const char* name;
  double limit_seconds;  // 0: no limit
  std::function<bool(Detail&)> check;
};

inline std::vector<Entry> entries(const AcceptanceOptions& options) {
  const double tol = options.lambda_law_tolerance;
  return {
      {1, "grover-period-invariance", 5, c01_period_invariance},
      {2, "lambda-power-law", 30, [tol](Detail& d) { return c02_lambda_law(d, tol); }},
      {3, "optimal-iterations", 0, c03_optimal_iterations},
      {4, "headline-fidelity-and-ratio", 1, c04_headline_numbers},
      {5, "fidelity-distance-ranking-inversion", 0, c05_ranking_inversion},
      {6, "swap-sensitivity", 0, c06_swap_sensitivity},
      {7, "ruler-exactness", 0, c07_ruler_exactness},
      {8, "analytic-cross-check", 60, c08_analytic_cross_check},
      {9, "resilience-threshold", 300, c09_resilience_threshold},
      {10, "entanglement-structure", 0, c10_entanglement_structure},
      {11, "white-noise-fragility", 0, c11_white_noise_fragility},
      {12, "sampled-consistency", 0, c12_sampled_consistency},
      {13, "distributed-equivalence", 0, c13_distributed_equivalence},
      {14, "theta-halving", 0, c14_theta_halving},
  };
}

}  // namespace acceptance

/// (id, name) of every criterion in order.
inline std::vector<std::pair<int, std::string>> acceptance_catalog() {
  std::vector<std::pair<int, std::string>> out;
  for (const auto& e : acceptance::entries({})) out.emplace_back(e.id, e.name);
  return out;
}

inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {}) {
  using namespace acceptance;
  std::vector<CriterionResult> results;
  for (const Entry& e : entries(options)) {
    if (!options.only.empty() && !options.only.count(e.id)) continue;
    CriterionResult r{e.id, e.name, false, "", 0, e.limit_seconds};
    Detail d;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.pass = e.check(d);
    } catch (const std::exception& ex) {
      d << "exception: " << ex.what();
      r.pass = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (e.limit_seconds > 0 && r.seconds > e.limit_seconds) {
      r.pass = false;
      d << " [over time limit " << e.limit_seconds << " s]";
    }
    r.detail = d.str();
    results.push_back(std::move(r));
  }
  return results;
}

/// "PASS 04 name (0.010 s): detail" per criterion; returns true iff all pass.
inline bool print_acceptance(std::ostream& os, const std::vector<CriterionResult>& results) {
  bool all = true;
  for (const auto& r : results) {
    char head[96];
    std::snprintf(head, sizeof head, "%s %02d %s (%.3f s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    os << head << r.detail << '\n';
    all = all && r.pass;
  }
  return all;
}

}  // namespace qnoise
