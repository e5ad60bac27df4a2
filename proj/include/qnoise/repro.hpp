#pragma once

// Table producers behind the command-line front end. Each returns complete
// CSV tables, metadata included, so identical requests give identical bytes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnoise/average.hpp"
#include "qnoise/csv.hpp"
#include "qnoise/entanglement.hpp"
#include "qnoise/grover.hpp"

namespace qnoise {

inline std::string join_numbers(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_double(v[i]);
  return s;
}

/// "lo:hi:count" or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& text) {
  detail::require(!text.empty(), "empty grid");
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(sep, start);
    parts.push_back(text.substr(start, end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (sep == ':') {
    detail::require(parts.size() == 3, "range grid must be lo:hi:count");
    const double count = parse_double(parts[2]);
    detail::require(count >= 1 && count == std::floor(count) && count <= 1e6, "grid count must be a positive integer");
    return uniform_grid(parse_double(parts[0]), parse_double(parts[1]), static_cast<std::size_t>(count));
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(parse_double(p));
  return out;
}

inline void stamp(CsvTable& t, const std::string& subcommand, std::optional<std::uint64_t> seed) {
  t.add_metadata("tool", std::string(kToolName));
  t.add_metadata("version", std::string(kToolVersion));
  t.add_metadata("subcommand", subcommand);
  t.add_metadata("seed", seed ? std::to_string(*seed) : "none");
}

// ---------------------------------------------------------------------------

struct GroverScanTables {
  CsvTable curve{{"lambda", "m", "P"}};
  CsvTable normalized{{"lambda", "P_norm"}};
};

inline GroverScanTables cmd_grover_scan(int n, std::uint64_t searched, const std::vector<double>& lambda_grid,
                                        int max_iterations) {
  detail::require(!lambda_grid.empty(), "lambda grid is empty");
  detail::require(n >= 2, "Grover scans need n >= 2");
  GroverScanTables out;
  for (CsvTable* t : {&out.curve, &out.normalized}) {
    stamp(*t, "grover-scan", std::nullopt);
    t->add_metadata("n", std::to_string(n));
    t->add_metadata("searched", std::to_string(searched));
    t->add_metadata("lambda_grid", join_numbers(lambda_grid));
    t->add_metadata("max_iter", std::to_string(max_iterations));
  }
  for (double l : lambda_grid) {
    const auto noise = StaticNoiseSpec::uniform(static_cast<std::size_t>(n), l);
    const GroverCurve c = run_grover({n, searched, noise, max_iterations});
    for (std::size_t m = 0; m < c.probabilities.size(); ++m)
      out.curve.add_row({l, static_cast<std::int64_t>(m), c.probabilities[m]});
    out.normalized.add_row({l, normalized_probability(n, searched, noise)});
  }
  return out;
}

// ---------------------------------------------------------------------------

enum class NoiseKind { static_noise, white_noise };

struct AverageRunRequest {
  std::vector<double> values;
  double theta = 0.0625;
  Variant variant = Variant::original;
  NoiseKind noise = NoiseKind::static_noise;
  std::vector<double> lambda_grid;  // lambda for static noise, tau_tilde for white noise
  bool sampled = false;
  std::size_t alpha = 1000;
  std::uint64_t seed = 0;
  bool swap = false;  // also emit the table with the first two values exchanged
};

struct AverageRunTables {
  CsvTable main{{"lambda", "F", "ratio", "D"}};
  std::optional<CsvTable> swapped;
};

namespace detail {

inline CsvTable average_table(const AverageRunRequest& r, const std::vector<double>& values) {
  CsvTable t({"lambda", "F", "ratio", "D"});
  stamp(t, "average-run", r.sampled ? std::optional(r.seed) : std::nullopt);
  t.add_metadata("values", join_numbers(values));
  t.add_metadata("theta", format_double(r.theta));
  t.add_metadata("variant", r.variant == Variant::ruler ? "ruler" : "original");
  t.add_metadata("noise", r.noise == NoiseKind::white_noise ? "white" : "static");
  t.add_metadata("mode", r.sampled ? "sampled" : "exact");
  if (r.sampled) t.add_metadata("alpha", std::to_string(r.alpha));
  const int n = static_cast<int>(values.size());
  const int total = n + (r.variant == Variant::ruler ? 1 : 0);
  for (double l : r.lambda_grid) {
    NoiseSpec noise = r.noise == NoiseKind::white_noise
                          ? NoiseSpec(WhiteNoiseSpec(l, total))
                          : NoiseSpec(StaticNoiseSpec::uniform(static_cast<std::size_t>(n), l));
    ExecutionMode mode = r.sampled ? ExecutionMode(SampledMode{r.alpha, r.seed}) : ExecutionMode(ExactMode{});
    const AverageReport rep = run_average({values, r.theta, r.variant, noise, mode});
    t.add_row({l, rep.fidelity, rep.ratio_estimate, rep.distance_ratio});
  }
  return t;
}

}  // namespace detail

inline AverageRunTables cmd_average_run(const AverageRunRequest& r) {
  detail::require(!r.lambda_grid.empty(), "lambda grid is empty");
  AverageRunTables out{detail::average_table(r, r.values), std::nullopt};
  if (r.swap) {
    detail::require(r.values.size() >= 2, "swap needs at least two values");
    auto v = r.values;
    std::swap(v[0], v[1]);
    out.swapped = detail::average_table(r, v);
  }
  return out;
}

// ---------------------------------------------------------------------------

inline CsvTable cmd_tolerance_scan(int n_min, int n_max, const std::vector<double>& tau_grid) {
  CsvTable t({"N", "tau", "max_abs_D", "worst_phase"});
  stamp(t, "tolerance-scan", std::nullopt);
  t.add_metadata("n_range", std::to_string(n_min) + ".." + std::to_string(n_max));
  t.add_metadata("tau_grid", join_numbers(tau_grid));
  for (const ToleranceCurve& c : tolerance_scan(n_min, n_max, tau_grid))
    for (const ToleranceRow& r : c.rows) t.add_row({static_cast<std::int64_t>(c.n), r.tau, r.max_abs_d, r.argument});
  return t;
}

inline NegativityMode parse_negativity_mode(const std::string& s) {
  if (s == "traced-ruler") return NegativityMode::traced_ruler;
  if (s == "traced-register") return NegativityMode::traced_register;
  if (s == "nontraced") return NegativityMode::nontraced;
  throw DomainError("unknown negativity mode '" + s + "'");
}

inline CsvTable cmd_negativity_scan(const std::string& mode, const std::vector<double>& tau_grid,
                                    int register_qubits = 2) {
  const NegativityMode m = parse_negativity_mode(mode);
  CsvTable t({"tau", "bipartition", "negativity"});
  stamp(t, "negativity-scan", std::nullopt);
  t.add_metadata("mode", mode);
  t.add_metadata("register_qubits", std::to_string(register_qubits));
  t.add_metadata("tau_grid", join_numbers(tau_grid));
  for (const NegativityRow& r : negativity_scan(register_qubits, tau_grid, m))
    t.add_row({r.tau, r.bipartition, r.negativity});
  return t;
}

}  // namespace qnoise
