#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace glspace::cli {

enum ExitCode : int {
  kPass = 0,
  kInternal = 1,
  kFail = 2,
  kDegenerate = 3,
  kParse = 64,
  kDomain = 65,
};

/// Fully resolved run configuration (flags > config file > defaults).
struct RunConfig {
  std::string command;  ///< norm, family, phi, kappa, tail, apply, measure-c, verify-p1, verify-p2, verify-p3

  std::vector<std::string> inputs;  ///< function CSV files
  std::optional<std::string> output;
  std::string format = "json";

  std::optional<double> q;
  std::optional<std::string> psi;
  std::optional<std::string> nu;
  std::optional<std::string> x_norm;
  std::optional<std::string> y_norm;
  std::vector<double> deltas;
  std::vector<double> t;

  std::optional<std::string> op;
  std::string base_dir;  ///< resolves relative kernel-table paths

  double q_range_lo = 1.0, q_range_hi = std::numeric_limits<double>::infinity();
  double p_range_lo = 1.0, p_range_hi = std::numeric_limits<double>::infinity();
  double q_grid_lo = 1.1, q_grid_hi = 32.0;
  double p_grid_lo = 1.1, p_grid_hi = 32.0;
  std::size_t window_points = 24;
  std::string pairs = "all";

  std::optional<double> a_pow;
  std::optional<double> b_pow;
  std::optional<double> c_hat;
  std::optional<double> d_hat;

  std::uint64_t seed = 0;
  std::size_t count = 20;
  std::size_t nodes = 256;
  double length = 1.0;

  double tolerance = 1e-6;
  std::size_t grid = 512;
  double pmax = 1e4;

  std::string help;  ///< usage text when command == "help"
};

/// Parses argv (argv[1] is the command) and an optional `--config file.json`.
/// Throws glspace::ParseError on malformed input.
RunConfig parse_args(int argc, const char* const* argv);

/// Executes the command; prints a one-line summary to `out`, diagnostics to `err`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with error-to-exit-code mapping.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace glspace::cli
