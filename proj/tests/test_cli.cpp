#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dircomp/commands.hpp"
#include "dircomp/special_functions.hpp"

using namespace dircomp;
using nlohmann::json;

namespace {

RunConfig symbol_config(double c1_re, double c2_abs) {
  RunConfig cfg;
  cfg.c1_re = c1_re;
  cfg.c2_abs = c2_abs;
  return cfg;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(10.0) == "10");
  CHECK(format_number(5000.0) == "5000");
  CHECK(format_number(1e-13) == "1e-13");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::acos(-1.0)) == "3.14159265359");
  CHECK(format_number(-2.5) == "-2.5");
  CHECK(format_number(1e300) == "1e+300");
}

TEST_CASE("bounds command") {
  SUBCASE("boundary") {
    const CommandResult res = run_command("bounds", symbol_config(1.0, 0.5));
    REQUIRE(res.exit_code == kExitOk);
    const json doc = json::parse(res.document);
    CHECK(doc["symbol_class"] == "Boundary");
    CHECK(doc["lower_sq"].get<double>() == doctest::Approx(1.64493406685).epsilon(1e-11));
    CHECK(doc["upper_sq"].get<double>() == doctest::Approx(2.61237534869).epsilon(1e-11));
    CHECK(doc["schur_r"].get<double>() == 1.0);
    CHECK(doc["approx_ratio"].is_null());
    CHECK(doc["version"] == std::string(kVersion));
    CHECK(doc["config"]["c1_re"].get<double>() == 1.0);
  }
  SUBCASE("constant") {
    const CommandResult res = run_command("bounds", symbol_config(2.0, 0.0));
    REQUIRE(res.exit_code == kExitOk);
    const json doc = json::parse(res.document);
    CHECK(doc["symbol_class"] == "Constant");
    CHECK(doc["lower_sq"] == doc["upper_sq"]);
    CHECK(doc["lower_sq"].get<double>() == doctest::Approx(1.08232323371).epsilon(1e-11));
    CHECK(doc["schur_r"].is_null());
  }
  SUBCASE("invalid symbol") {
    const CommandResult res = run_command("bounds", symbol_config(0.6, 0.5));
    CHECK(res.exit_code == kExitInvalidInput);
    CHECK(res.document.empty());
    CHECK(res.diagnostic == "symbol violates Re c1 >= 1/2 + |c2|");
  }
  SUBCASE("csv") {
    RunConfig cfg = symbol_config(2.0, 0.5);
    cfg.format = OutputFormat::Csv;
    const auto rows = parse_csv(run_command("bounds", cfg).document);
    REQUIRE(!rows.empty());
    CHECK(rows[0] == std::vector<std::string>{"key", "value"});
    bool found = false;
    for (const auto& r : rows) {
      REQUIRE(r.size() == 2);
      if (r[0] == "symbol_class") found = r[1] == "Compact";
    }
    CHECK(found);
  }
}

TEST_CASE("matrix-norm command") {
  SUBCASE("compact default truncation") {
    RunConfig cfg = symbol_config(2.0, 0.5);
    cfg.rows = 60;
    cfg.cols = 5000;
    const CommandResult res = run_command("matrix-norm", cfg);
    REQUIRE(res.exit_code == kExitOk);
    const json doc = json::parse(res.document);
    CHECK(doc["within_theorem_bracket"] == true);
    CHECK(doc["upper_certified"] == true);
    CHECK(doc["rows"] == 60);
    CHECK(doc["cols"] == 5000);
    CHECK(doc["lower"].get<double>() <= doc["upper"].get<double>());
  }
  SUBCASE("1 x 1") {
    RunConfig cfg = symbol_config(2.0, 0.5);
    cfg.rows = 0;
    cfg.cols = 1;
    const json doc = json::parse(run_command("matrix-norm", cfg).document);
    CHECK(doc["lower"].get<double>() == 1.0);
  }
  SUBCASE("boundary is uncertified") {
    RunConfig cfg = symbol_config(1.0, 0.5);
    cfg.rows = 40;
    cfg.cols = 2000;
    const CommandResult res = run_command("matrix-norm", cfg);
    REQUIRE(res.exit_code == kExitOk);
    const json doc = json::parse(res.document);
    CHECK(doc["upper"] == "uncertified");
    CHECK(doc["upper_certified"] == false);
  }
  SUBCASE("resource cap") {
    setenv("DIRCOMP_MAX_ENTRIES", "1000", 1);
    RunConfig cfg = symbol_config(2.0, 0.5);
    cfg.rows = 10;
    cfg.cols = 1000;
    CHECK(run_command("matrix-norm", cfg).exit_code == kExitResourceLimit);
    unsetenv("DIRCOMP_MAX_ENTRIES");
  }
}

TEST_CASE("approx-numbers command") {
  RunConfig cfg = symbol_config(2.0, 0.5);
  cfg.n_max = 10;
  cfg.format = OutputFormat::Csv;
  const CommandResult res = run_command("approx-numbers", cfg);
  REQUIRE(res.exit_code == kExitOk);
  const auto rows = parse_csv(res.document);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == std::vector<std::string>{"N", "sigma", "bound", "ratio", "pass"});
  for (int n = 1; n <= 10; ++n) {
    const auto& r = rows[n];
    CHECK(std::stoi(r[0]) == n);
    CHECK(std::stod(r[2]) == doctest::Approx(std::sqrt(1.5) * std::pow(1.0 / 3.0, n)).epsilon(1e-11));
    CHECK(std::stod(r[1]) <= std::stod(r[2]) + 1e-9);
    CHECK(r[4] == "true");
  }

  cfg.n_max = 0;
  cfg.format = OutputFormat::Json;
  const CommandResult empty = run_command("approx-numbers", cfg);
  CHECK(empty.exit_code == kExitOk);
  CHECK(json::parse(empty.document)["table"].empty());

  const CommandResult boundary = run_command("approx-numbers", symbol_config(1.0, 0.5));
  CHECK(boundary.exit_code == kExitInvalidInput);
  CHECK(boundary.diagnostic.find("non-compact") != std::string::npos);
}

TEST_CASE("verify-lemmas command") {
  RunConfig cfg;
  const CommandResult res = run_command("verify-lemmas", cfg);
  REQUIRE(res.exit_code == kExitOk);
  const json doc = json::parse(res.document);
  CHECK(std::abs(doc["crossing_root"].get<double>() - 6.2102) <= 5e-4);
  CHECK(doc["all_pass"] == true);
  for (const char* lemma : {"zeta_bracket", "zeta_lower_h", "zeta_lower_g", "log_moment_bound", "f_g_dominance"}) {
    CAPTURE(lemma);
    CHECK(doc["lemmas"][lemma]["pass"] == true);
    CHECK(doc["lemmas"][lemma]["min_margin"].get<double>() >= -1e-12);
  }

  cfg.s_max = 2.0;
  CHECK(run_command("verify-lemmas", cfg).exit_code == kExitOk);

  cfg.inject_fault = true;
  const CommandResult bad = run_command("verify-lemmas", cfg);
  CHECK(bad.exit_code == kExitVerificationFailed);
  CHECK(bad.diagnostic.find("zeta_bracket failed at") != std::string::npos);
}

TEST_CASE("figure command") {
  RunConfig cfg;
  cfg.format = OutputFormat::Csv;
  const CommandResult res = run_command("figure", cfg);
  REQUIRE(res.exit_code == kExitOk);
  const auto rows = parse_csv(res.document);
  REQUIRE(rows.size() == 202);
  CHECK(rows[0] == std::vector<std::string>{"x", "lower_f", "lower_g", "zeta"});
  CHECK(rows[201][0] == "s2");
  const double s2 = std::stod(rows[201][1]);
  for (int k = 1; k <= 200; ++k) {
    REQUIRE(rows[k].size() == 4);
    const double x = std::stod(rows[k][0]);
    const double f = std::stod(rows[k][1]);
    const double g = std::stod(rows[k][2]);
    const double z = std::stod(rows[k][3]);
    CAPTURE(x);
    CHECK(f <= z + 1e-11);
    CHECK(g <= z + 1e-11);
    if (x < s2) CHECK(f <= g);
    if (x > s2) CHECK(g <= f);
  }
  // on 100 points the grid step is 0.1, so row 20 is x = 2
  cfg.figure_points = 100;
  const auto small = parse_csv(run_command("figure", cfg).document);
  REQUIRE(small.size() == 102);
  CHECK(std::stod(small[20][0]) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::stod(small[20][1]) == doctest::Approx(0.7660).epsilon(1e-4));
  CHECK(std::stod(small[20][2]) == doctest::Approx(0.5 + 2.0 / 3.0).epsilon(1e-11));
  CHECK(std::stod(small[20][3]) == doctest::Approx(1.2020569031595943).epsilon(1e-11));
}

TEST_CASE("deterministic output") {
  for (const char* cmd : {"bounds", "matrix-norm", "approx-numbers", "figure"}) {
    RunConfig cfg = symbol_config(1.5, 0.3);
    cfg.rows = 20;
    cfg.cols = 500;
    CAPTURE(cmd);
    CHECK(run_command(cmd, cfg).document == run_command(cmd, cfg).document);
  }
}
