#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "dircomp/commands.hpp"

int main(int argc, char** argv) {
  using namespace dircomp;

  RunConfig cfg;
  CLI::App app{"Norm bounds, matrix realization and approximation numbers of composition "
               "operators with symbols c1 + c2 q^-s on the Hardy-Dirichlet space"};
  app.set_version_flag("--version", std::string(kVersion));
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.fallthrough();
  app.require_subcommand(1);

  int rows = -1;
  int cols = -1;
  double tol = -1.0;
  std::string format = "json";
  app.add_option("--c1-re", cfg.c1_re, "Re c1")->capture_default_str();
  app.add_option("--c1-im", cfg.c1_im, "Im c1")->capture_default_str();
  app.add_option("--c2-abs", cfg.c2_abs, "|c2|")->capture_default_str();
  app.add_option("--c2-arg", cfg.c2_arg, "arg c2 (radians)")->capture_default_str();
  app.add_option("--q", cfg.q, "integer base q >= 2")->capture_default_str();
  app.add_option("--rows", rows, "largest row index I of the truncation");
  app.add_option("--cols", cols, "number of columns J of the truncation");
  app.add_option("--tol", tol, "absolute and relative tolerance of every summation");
  app.add_option("--max-terms", cfg.budget.max_terms, "hard cap on summation length")->capture_default_str();
  auto* format_opt = app.add_option("--format", format, "json or csv (figure defaults to csv)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--output", cfg.output, "output file (default stdout)");

  app.add_subcommand("bounds", "two-sided norm bounds and kernel lower bound");
  auto* matrix = app.add_subcommand("matrix-norm", "truncated-matrix norm against the theorem bracket");
  matrix->add_option("--dump", cfg.dump, "write the truncated matrix to this file");
  auto* approx = app.add_subcommand("approx-numbers", "singular values against the approximation-number bound");
  approx->add_option("--n-max", cfg.n_max, "largest N in the table")->capture_default_str();
  auto* verify = app.add_subcommand("verify-lemmas", "inequality grids for the zeta lemmas");
  verify->add_option("--s-min", cfg.s_min, "smallest s of the grids")->capture_default_str();
  verify->add_option("--s-max", cfg.s_max, "largest s of the grids")->capture_default_str();
  verify->add_option("--grid-points", cfg.grid_points, "points per grid")->capture_default_str();
  verify->add_flag("--inject-fault", cfg.inject_fault, "self-test: flip the zeta bracket inequality");
  auto* figure = app.add_subcommand("figure", "lower bounds for zeta(1+x) on [0.1, 10]");
  figure->add_option("--points", cfg.figure_points, "number of x values")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidInput;
  }

  if (rows >= 0) cfg.rows = rows;
  if (cols >= 0) cfg.cols = cols;
  if (tol > 0.0) cfg.budget.abs_tol = cfg.budget.rel_tol = tol;
  if (tol == 0.0 || (tol < 0.0 && tol != -1.0)) {
    std::cerr << "--tol must be positive\n";
    return kExitInvalidInput;
  }
  cfg.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  cfg.format_given = format_opt->count() > 0;

  const CLI::App* sub = app.get_subcommands().front();
  const CommandResult res = run_command(sub->get_name(), cfg);
  if (!res.diagnostic.empty()) std::cerr << res.diagnostic << (res.diagnostic.back() == '\n' ? "" : "\n");
  if (!res.document.empty()) {
    if (cfg.output.empty()) {
      std::cout << res.document;
    } else {
      std::ofstream out(cfg.output, std::ios::binary);
      if (!out) {
        std::cerr << "cannot open output file " << cfg.output << "\n";
        return kExitInvalidInput;
      }
      out << res.document;
    }
  }
  return res.exit_code;
}
