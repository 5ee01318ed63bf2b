#pragma once

// Command-line front end. `cli_main` parses arguments and dispatches to
// `run`; both write reports to the given stream or to --output.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace durr::cli {

enum class OutputFormat { csv, json };

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,      // unexpected error
  kConfigError = 2,  // invalid flags or values
  kSaturated = 3,    // truncation saturated; output written and flagged
  kNumerical = 4,    // quadrature or other accuracy failure
};

struct CommandConfig {
  std::string subcommand;

  std::vector<int> n{10};
  std::vector<std::string> beta{"0"};  // decimal or "p/q"
  std::vector<double> x{1.0};
  std::optional<std::string> x_grid;   // "a:b:h", replaces x
  std::vector<long long> k{1};
  std::optional<int> r;
  bool exact = false;
  std::string method = "stirling-sum";
  std::string family = "all";
  bool full_sweep = false;  // paper-check over the default sweep grid
  std::string op = "durrmeyer";
  std::string f = "e1";
  double a = 0.0;
  double b = 2.0;
  double step = 0.05;
  double modulus_step = 1e-3;
  double tol = 0.05;

  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  int max_panels = 2000;
  double mass_tol = 1e-12;
  long long hard_cap = 1'000'000;

  OutputFormat format = OutputFormat::csv;
  std::string output;  // empty: the output stream

  /// Throws durr::DomainError on an invalid combination.
  void validate() const;
};

/// Runs one subcommand and returns its exit code. Messages go to err.
int run(const CommandConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (including argv[0]) and runs the selected subcommand.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace durr::cli
