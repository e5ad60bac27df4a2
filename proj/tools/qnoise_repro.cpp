// Command-line front end: figure tables as CSV plus gnuplot scripts, and the
// acceptance report.
//
// Exit codes: 0 success, 1 computation failure, 2 usage error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qnoise/acceptance.hpp"
#include "qnoise/repro.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kComputationFailure = 1;
constexpr int kUsageError = 2;

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(',', start);
    out.push_back(qnoise::parse_double(text.substr(start, end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

/// `path` with its extension replaced by `suffix` (e.g. "_swap.csv").
std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

void emit(const qnoise::CsvTable& table, const std::string& out, int x, int y, const std::string& title) {
  if (out.empty()) {
    table.write(std::cout);
    return;
  }
  std::ofstream csv(out, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + out);
  table.write(csv);
  std::ofstream gp(sibling(out, ".gp"), std::ios::binary);
  gp << qnoise::plot_script(std::filesystem::path(out).filename().string(), table, x, y, title);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy quantum algorithm figure reproduction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qnoise::kToolVersion));

  std::string out;
  std::uint64_t seed = 0;

  // grover-scan
  auto* grover = app.add_subcommand("grover-scan", "P(m) against lambda, plus the normalized table");
  int n = 2;
  std::uint64_t searched = 0;
  std::string lambda_grid = "0.5:1:11";
  int max_iter = 10;
  grover->add_option("--n", n, "register qubits")->check(CLI::Range(2, qnoise::kMaxQubits));
  grover->add_option("--searched", searched, "index of the searched state");
  grover->add_option("--lambda-grid", lambda_grid, "lo:hi:count or comma list");
  grover->add_option("--max-iter", max_iter, "Grover iterations")->check(CLI::NonNegativeNumber);
  grover->add_option("--out", out, "output CSV path (stdout if omitted)");

  // average-run
  auto* average = app.add_subcommand("average-run", "F, ratio and D against lambda");
  std::string values = "-0.775,0.25,0.675";
  double theta = 0.0625;
  std::string variant = "original";
  std::string noise = "static";
  std::optional<double> lambda;
  std::string mode = "exact";
  std::size_t alpha = 1000;
  bool swap = false;
  average->add_option("--values", values, "comma-separated values in [-1,1]");
  average->add_option("--theta", theta, "scale parameter");
  average->add_option("--variant", variant)->check(CLI::IsMember({"original", "ruler"}));
  average->add_option("--noise", noise, "static: grid is lambda; white: grid is tau_tilde")
      ->check(CLI::IsMember({"static", "white"}));
  auto* lambda_opt = average->add_option("--lambda", lambda, "single noise value");
  average->add_option("--lambda-grid", lambda_grid, "lo:hi:count or comma list")->excludes(lambda_opt);
  average->add_option("--mode", mode)->check(CLI::IsMember({"exact", "sampled"}));
  average->add_option("--alpha", alpha, "repetitions in sampled mode")->check(CLI::PositiveNumber);
  average->add_option("--seed", seed);
  average->add_flag("--swap", swap, "also emit the table with the first two values exchanged");
  average->add_option("--out", out, "output CSV path (stdout if omitted)");

  // tolerance-scan
  auto* tolerance = app.add_subcommand("tolerance-scan", "worst-case |D| against purity");
  int n_min = 3, n_max = 8;
  std::string tau_grid = "0:1:101";
  tolerance->add_option("--n-min", n_min)->check(CLI::Range(3, 8));
  tolerance->add_option("--n-max", n_max)->check(CLI::Range(3, 8));
  tolerance->add_option("--tau-grid", tau_grid, "lo:hi:count or comma list");
  tolerance->add_option("--out", out, "output CSV path (stdout if omitted)");

  // negativity-scan
  auto* negativity = app.add_subcommand("negativity-scan", "PPT negativity of the prepared register");
  std::string neg_mode = "nontraced";
  int register_qubits = 2;
  negativity->add_option("--mode", neg_mode)->check(CLI::IsMember({"traced-ruler", "traced-register", "nontraced"}));
  negativity->add_option("--register-qubits", register_qubits)->check(CLI::Range(2, 3));
  negativity->add_option("--tau-grid", tau_grid, "lo:hi:count or comma list");
  negativity->add_option("--out", out, "output CSV path (stdout if omitted)");

  // acceptance
  auto* accept = app.add_subcommand("acceptance", "run every acceptance criterion");
  std::vector<int> only;
  accept->add_option("--criterion", only, "restrict to these criterion ids")->check(CLI::Range(1, 14));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (grover->parsed()) {
      const auto tables = qnoise::cmd_grover_scan(n, searched, qnoise::parse_grid(lambda_grid), max_iter);
      emit(tables.curve, out, 2, 3, "P against m");
      if (!out.empty()) emit(tables.normalized, sibling(out, "_norm.csv"), 1, 2, "P_norm against lambda");
      else tables.normalized.write(std::cout);
    } else if (average->parsed()) {
      qnoise::AverageRunRequest r;
      r.values = parse_values(values);
      r.theta = theta;
      r.variant = variant == "ruler" ? qnoise::Variant::ruler : qnoise::Variant::original;
      r.noise = noise == "white" ? qnoise::NoiseKind::white_noise : qnoise::NoiseKind::static_noise;
      r.lambda_grid = lambda ? std::vector<double>{*lambda} : qnoise::parse_grid(lambda_grid);
      r.sampled = mode == "sampled";
      r.alpha = alpha;
      r.seed = seed;
      r.swap = swap;
      const auto tables = qnoise::cmd_average_run(r);
      emit(tables.main, out, 1, 4, "D against lambda");
      if (tables.swapped) {
        if (!out.empty()) emit(*tables.swapped, sibling(out, "_swap.csv"), 1, 4, "D against lambda, swapped");
        else tables.swapped->write(std::cout);
      }
    } else if (tolerance->parsed()) {
      if (n_min > n_max) throw qnoise::DomainError("--n-min exceeds --n-max");
      emit(qnoise::cmd_tolerance_scan(n_min, n_max, qnoise::parse_grid(tau_grid)), out, 2, 3, "max|D| against tau");
    } else if (negativity->parsed()) {
      emit(qnoise::cmd_negativity_scan(neg_mode, qnoise::parse_grid(tau_grid), register_qubits), out, 1, 3,
           "negativity against tau");
    } else if (accept->parsed()) {
      qnoise::AcceptanceOptions opts;
      opts.only.insert(only.begin(), only.end());
      return qnoise::print_acceptance(std::cout, qnoise::run_acceptance(opts)) ? kOk : kComputationFailure;
    }
  } catch (const qnoise::DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kComputationFailure;
  }
  return kOk;
}
