#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dircomp/special_functions.hpp"
#include "dircomp/symbol.hpp"

namespace dircomp {

inline constexpr std::string_view kVersion = "1.0.0";

enum class OutputFormat { Json, Csv };

/// Exit-status contract of the command-line front end.
enum ExitStatus : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitInvalidInput = 2,
  kExitResourceLimit = 3,
};

struct RunConfig {
  double c1_re = 2.0;
  double c1_im = 0.0;
  double c2_abs = 0.5;
  double c2_arg = 0.0;
  int q = 2;
  std::optional<int> rows;  // I
  std::optional<int> cols;  // J
  PrecisionBudget budget;
  OutputFormat format = OutputFormat::Json;
  bool format_given = false;  // figure defaults to CSV unless --format was set
  std::string output;  // empty: stdout

  int n_max = 15;        // approx-numbers
  std::string dump;      // matrix-norm: optional matrix dump path
  double s_min = 1.001;  // verify-lemmas grids
  double s_max = 100.0;
  int grid_points = 500;
  bool inject_fault = false;  // verify-lemmas self-test: flips one inequality
  int figure_points = 200;

  /// Throws DomainError on an invalid symbol or budget.
  DirichletSymbol symbol() const;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string document;    // emitted on the output stream/file
  std::string diagnostic;  // emitted on stderr
};

CommandResult cmd_bounds(const RunConfig& cfg);
CommandResult cmd_matrix_norm(const RunConfig& cfg);
CommandResult cmd_approx_numbers(const RunConfig& cfg);
CommandResult cmd_verify_lemmas(const RunConfig& cfg);
CommandResult cmd_figure(const RunConfig& cfg);

/// Runs the named subcommand, mapping library exceptions onto the exit-status contract.
CommandResult run_command(std::string_view name, const RunConfig& cfg);

/// Shortest representation of v with at most 12 significant digits.
std::string format_number(double v);

}  // namespace dircomp
