#include "dircomp/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dircomp/bounds.hpp"
#include "dircomp/errors.hpp"
#include "dircomp/operator_matrix.hpp"

namespace dircomp {

namespace {

using nlohmann::json;

constexpr double kApproxSlack = 1e-9;
constexpr std::size_t kMaxListedFailures = 20;

// JSON number rounded to 12 significant digits; non-finite values become null.
json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

json config_echo(const RunConfig& cfg) {
  json c;
  c["c1_re"] = num(cfg.c1_re);
  c["c1_im"] = num(cfg.c1_im);
  c["c2_abs"] = num(cfg.c2_abs);
  c["c2_arg"] = num(cfg.c2_arg);
  c["q"] = cfg.q;
  c["rows"] = cfg.rows ? json(*cfg.rows) : json(nullptr);
  c["cols"] = cfg.cols ? json(*cfg.cols) : json(nullptr);
  c["abs_tol"] = num(cfg.budget.abs_tol);
  c["rel_tol"] = num(cfg.budget.rel_tol);
  c["max_terms"] = cfg.budget.max_terms;
  c["format"] = cfg.format == OutputFormat::Json ? "json" : "csv";
  return c;
}

json header(std::string_view command, const RunConfig& cfg) {
  json doc;
  doc["command"] = command;
  doc["version"] = kVersion;
  doc["config"] = config_echo(cfg);
  return doc;
}

// Same layout as json::dump(2), but floats go through format_number so every
// number is printed with at most 12 significant digits.
void write_json(const json& v, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(it.key()).dump() + ": ";
      write_json(it.value(), depth + 1, out);
    }
    out += "\n" + close_pad + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k > 0) out += ",\n";
      out += pad;
      write_json(v[k], depth + 1, out);
    }
    out += "\n" + close_pad + "]";
  } else if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      out += "null";
      return;
    }
    std::string text = format_number(d);
    if (text.find_first_of(".e") == std::string::npos) text += ".0";
    out += text;
  } else {
    out += v.dump();
  }
}

std::string render(const json& doc) {
  std::string out;
  write_json(doc, 0, out);
  return out + "\n";
}

std::string compact(const json& v) {
  std::string out;
  write_json(v, 0, out);
  std::string flat;
  bool in_string = false;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const char c = out[k];
    if (c == '"' && (k == 0 || out[k - 1] != '\\')) in_string = !in_string;
    if (!in_string && (c == '\n' || c == ' ')) continue;
    flat += c;
  }
  return flat;
}

// key,value rows for flat documents.
std::string render_key_values(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : rows) out += k + "," + v + "\n";
  return out;
}

std::string csv_value(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string render_flat(const json& doc, OutputFormat format) {
  if (format == OutputFormat::Json) return render(doc);
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [k, v] : doc.items()) {
    if (v.is_object()) {
      for (const auto& [k2, v2] : v.items()) rows.emplace_back(k + "." + k2, csv_value(v2));
    } else {
      rows.emplace_back(k, csv_value(v));
    }
  }
  return render_key_values(rows);
}

Truncation truncation_for(const RunConfig& cfg, const DirichletSymbol& sym) {
  Truncation t = default_truncation(sym);
  if (cfg.rows) t.max_row = *cfg.rows;
  if (cfg.cols) t.cols = *cfg.cols;
  return t;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    xs[k] = (n == 1) ? lo : lo * std::exp(std::log(hi / lo) * k / (n - 1));
  }
  return xs;
}

struct LemmaTally {
  std::string name;
  int checked = 0;
  int passed = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  json failures = json::array();

  void record(json point, double margin) {
    ++checked;
    min_margin = std::min(min_margin, margin);
    if (margin >= 0.0) {
      ++passed;
    } else if (failures.size() < kMaxListedFailures) {
      failures.push_back({{"point", std::move(point)}, {"margin", num(margin)}});
    }
  }

  bool ok() const { return passed == checked; }

  json to_json() const {
    return {{"checked", checked},  {"passed", passed},  {"min_margin", num(min_margin)},
            {"pass", ok()},        {"failures", failures}};
  }
};

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  int precision = 1;
  for (; precision < 12; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  // %g switches to exponent form once the exponent reaches the precision;
  // keep plain notation for moderate integers such as 10 or 5000.
  const int exponent = (v == 0.0) ? 0 : static_cast<int>(std::floor(std::log10(std::abs(v))));
  if (exponent >= precision && exponent < 12) precision = exponent + 1;
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

DirichletSymbol RunConfig::symbol() const {
  budget.validate();
  return DirichletSymbol::from_polar(c1_re, c1_im, c2_abs, c2_arg, q);
}

CommandResult cmd_bounds(const RunConfig& cfg) {
  const DirichletSymbol sym = cfg.symbol();
  const NormBoundReport report = norm_bounds(sym, cfg.budget);

  json doc = header("bounds", cfg);
  doc["symbol_class"] = to_string(report.symbol_class);
  doc["schur_r"] = report.schur_r ? num(*report.schur_r) : json(nullptr);
  doc["lower_sq"] = num(report.lower_sq.value);
  doc["lower_sq_error"] = num(report.lower_sq.error_bound);
  doc["upper_sq"] = num(report.upper_sq.value);
  doc["upper_sq_error"] = num(report.upper_sq.error_bound);
  doc["kernel_lower_sq"] = num(report.kernel.value);
  doc["kernel_argmax"] = std::isfinite(report.kernel.argmax) ? num(report.kernel.argmax) : json("inf");
  if (report.symbol_class != SymbolClass::Boundary) {
    const ApproxNumberBound an = approx_number_bound(sym);
    doc["approx_prefactor"] = num(an.prefactor);
    doc["approx_ratio"] = num(an.ratio);
  } else {
    doc["approx_prefactor"] = nullptr;
    doc["approx_ratio"] = nullptr;
  }
  return {kExitOk, render_flat(doc, cfg.format), {}};
}

CommandResult cmd_matrix_norm(const RunConfig& cfg) {
  const DirichletSymbol sym = cfg.symbol();
  const Truncation t = truncation_for(cfg, sym);
  const TruncatedMatrix m = build_matrix(sym, t.max_row, t.cols, cfg.budget);
  if (!cfg.dump.empty()) {
    std::ofstream out(cfg.dump);
    if (!out) throw DomainError("cannot open matrix dump file " + cfg.dump);
    write_matrix(out, m);
  }
  const NormEstimate est = operator_norm_estimate(m);
  const NormBoundReport report = norm_bounds(sym, cfg.budget);

  // Row 0 alone carries sum_{j<=J} j^(-2 sigma1), so the truncated norm can only
  // fall short of zeta(2 sigma1) by that row's column tail.
  const double two_sigma = 2.0 * sym.sigma1();
  const double row0_tail = log_moment_tail(two_sigma, 0, static_cast<double>(t.cols)).upper;
  const double lower_sq = est.lower * est.lower;
  const double slack = cfg.budget.target(report.upper_sq.value);
  const bool above = lower_sq + row0_tail + slack >= report.lower_sq.lo();
  const bool below = lower_sq <= report.upper_sq.hi() + slack;
  const bool within = above && below;

  json doc = header("matrix-norm", cfg);
  doc["symbol_class"] = to_string(report.symbol_class);
  doc["rows"] = t.max_row;
  doc["cols"] = t.cols;
  doc["lower"] = num(est.lower);
  doc["lower_sq"] = num(lower_sq);
  doc["tail_bound"] = std::isfinite(m.tail_bound()) ? num(m.tail_bound()) : json("uncertified");
  doc["upper"] = std::isfinite(est.upper) ? num(est.upper) : json("uncertified");
  doc["upper_certified"] = std::isfinite(est.upper) && est.converged;
  doc["iterations"] = est.iterations;
  doc["converged"] = est.converged;
  doc["theorem_lower_sq"] = num(report.lower_sq.value);
  doc["theorem_upper_sq"] = num(report.upper_sq.value);
  doc["within_theorem_bracket"] = within;

  CommandResult res{within ? kExitOk : kExitVerificationFailed, render_flat(doc, cfg.format), {}};
  if (!within) {
    res.diagnostic = "truncated norm^2 " + format_number(lower_sq) + " lies outside [" +
                     format_number(report.lower_sq.value) + ", " + format_number(report.upper_sq.value) + "]";
  }
  return res;
}

CommandResult cmd_approx_numbers(const RunConfig& cfg) {
  const DirichletSymbol sym = cfg.symbol();
  const ApproxNumberBound an = approx_number_bound(sym);
  if (cfg.n_max < 0) throw DomainError("approx-numbers: N_max must be non-negative");

  json doc = header("approx-numbers", cfg);
  doc["prefactor"] = num(an.prefactor);
  doc["ratio"] = num(an.ratio);
  json table = json::array();
  std::string csv = "N,sigma,bound,ratio,pass\n";
  bool all_pass = true;
  if (cfg.n_max > 0) {
    const Truncation t = truncation_for(cfg, sym);
    const TruncatedMatrix m = build_matrix(sym, t.max_row, t.cols, cfg.budget);
    const SingularSpectrum spec = singular_values(m, cfg.n_max + 1);
    doc["rows"] = t.max_row;
    doc["cols"] = t.cols;
    for (int n = 1; n <= cfg.n_max; ++n) {
      const double sigma = spec.values[n];
      const double bound = an.bound_at(n);
      const double ratio = spec.values[n - 1] > 0.0 ? sigma / spec.values[n - 1] : 0.0;
      const bool pass = sigma <= bound + kApproxSlack;
      all_pass = all_pass && pass;
      table.push_back({{"N", n}, {"sigma", num(sigma)}, {"bound", num(bound)}, {"ratio", num(ratio)}, {"pass", pass}});
      csv += std::to_string(n) + "," + format_number(sigma) + "," + format_number(bound) + "," +
             format_number(ratio) + "," + (pass ? "true" : "false") + "\n";
    }
  }
  doc["table"] = table;
  doc["all_pass"] = all_pass;

  CommandResult res{all_pass ? kExitOk : kExitVerificationFailed,
                    cfg.format == OutputFormat::Json ? render(doc) : csv, {}};
  if (!all_pass) res.diagnostic = "a computed singular value exceeds the approximation-number bound";
  return res;
}

CommandResult cmd_verify_lemmas(const RunConfig& cfg) {
  cfg.budget.validate();
  if (!(cfg.s_min > 1.0) || !(cfg.s_max >= cfg.s_min) || cfg.grid_points < 1) {
    throw DomainError("verify-lemmas: requires 1 < s-min <= s-max and a positive grid size");
  }
  const PrecisionBudget& budget = cfg.budget;

  LemmaTally bracket{"zeta_bracket"};
  LemmaTally lower_h{"zeta_lower_h"};
  LemmaTally lower_g{"zeta_lower_g"};
  LemmaTally moments{"log_moment_bound"};
  LemmaTally dominance{"f_g_dominance"};

  for (double s : log_grid(cfg.s_min, cfg.s_max, cfg.grid_points)) {
    const CertifiedValue z = zeta(s, budget);
    const double lower = 1.0 / (s - 1.0);
    const double upper = s / (s - 1.0);
    double margin = std::min(z.hi() - lower, upper - z.lo());
    if (cfg.inject_fault) margin = lower - z.hi();
    bracket.record({{"s", num(s)}}, margin);
    lower_h.record({{"s", num(s)}}, z.hi() - lower_bound_h(s));
  }

  for (double x : log_grid(cfg.s_min - 1.0, cfg.s_max, cfg.grid_points)) {
    const CertifiedValue z = zeta(1.0 + x, budget);
    lower_g.record({{"x", num(x)}}, z.hi() - (1.0 / x + lower_bound_g(x)));
  }

  for (double s : {1.5, 2.0, 3.0, 10.0}) {
    if (s < cfg.s_min || s > cfg.s_max) continue;
    const CertifiedValue z = zeta(s, budget);
    for (int i = 1; i <= 10; ++i) {
      const CertifiedValue sum = log_moment_sum(s, i, budget);
      moments.record({{"s", num(s)}, {"i", i}}, log_moment_bound(s, i, z.lo()) - sum.hi());
    }
  }

  const double s2 = crossing_root(budget);
  const double root_tol = std::max(budget.abs_tol, 1e-9);
  const int n = cfg.figure_points;
  for (int k = 0; k < n; ++k) {
    const double x = 0.1 + (10.0 - 0.1) * k / std::max(n - 1, 1);
    if (std::abs(x - s2) <= root_tol) continue;
    const double diff = lower_bound_f(x) - lower_bound_g(x);
    dominance.record({{"x", num(x)}}, x > s2 ? diff : -diff);
  }

  const std::vector<const LemmaTally*> all{&bracket, &lower_h, &lower_g, &moments, &dominance};
  bool ok = true;
  json doc = header("verify-lemmas", cfg);
  json lemmas;
  std::string diagnostic;
  for (const LemmaTally* t : all) {
    lemmas[t->name] = t->to_json();
    ok = ok && t->ok();
    for (const auto& f : t->failures) diagnostic += t->name + " failed at " + compact(f["point"]) + " margin " + compact(f["margin"]) + "\n";
  }
  doc["lemmas"] = lemmas;
  doc["crossing_root"] = num(s2);
  doc["all_pass"] = ok;

  std::string text;
  if (cfg.format == OutputFormat::Json) {
    text = render(doc);
  } else {
    text = "lemma,checked,passed,min_margin,pass\n";
    for (const LemmaTally* t : all) {
      text += t->name + "," + std::to_string(t->checked) + "," + std::to_string(t->passed) + "," +
              format_number(t->min_margin) + "," + (t->ok() ? "true" : "false") + "\n";
    }
    text += "crossing_root," + format_number(s2) + ",,,\n";
  }
  return {ok ? kExitOk : kExitVerificationFailed, text, diagnostic};
}

CommandResult cmd_figure(const RunConfig& cfg) {
  cfg.budget.validate();
  const int n = cfg.figure_points;
  if (n < 2) throw DomainError("figure: requires at least 2 points");
  const double s2 = crossing_root(cfg.budget);

  std::vector<double> xs, fs, gs, zs;
  bool ordered = true;
  for (int k = 0; k < n; ++k) {
    const double x = 0.1 + (10.0 - 0.1) * k / (n - 1);
    const CertifiedValue z = zeta(x + 1.0, cfg.budget);
    xs.push_back(x);
    fs.push_back(1.0 / x + lower_bound_f(x));
    gs.push_back(1.0 / x + lower_bound_g(x));
    zs.push_back(z.value);
    ordered = ordered && fs.back() <= z.hi() && gs.back() <= z.hi();
  }

  std::string text;
  if (cfg.format == OutputFormat::Csv || !cfg.format_given) {
    text = "x,lower_f,lower_g,zeta\n";
    for (int k = 0; k < n; ++k) {
      text += format_number(xs[k]) + "," + format_number(fs[k]) + "," + format_number(gs[k]) + "," +
              format_number(zs[k]) + "\n";
    }
    text += "s2," + format_number(s2) + ",,\n";
  } else {
    json doc = header("figure", cfg);
    json x = json::array(), f = json::array(), g = json::array(), z = json::array();
    for (int k = 0; k < n; ++k) {
      x.push_back(num(xs[k]));
      f.push_back(num(fs[k]));
      g.push_back(num(gs[k]));
      z.push_back(num(zs[k]));
    }
    doc["x"] = x;
    doc["lower_f"] = f;
    doc["lower_g"] = g;
    doc["zeta"] = z;
    doc["s2"] = num(s2);
    text = render(doc);
  }
  CommandResult res{ordered ? kExitOk : kExitVerificationFailed, text, {}};
  if (!ordered) res.diagnostic = "a lower-bound column exceeds zeta(x+1)";
  return res;
}

CommandResult run_command(std::string_view name, const RunConfig& cfg) {
  try {
    if (name == "bounds") return cmd_bounds(cfg);
    if (name == "matrix-norm") return cmd_matrix_norm(cfg);
    if (name == "approx-numbers") return cmd_approx_numbers(cfg);
    if (name == "verify-lemmas") return cmd_verify_lemmas(cfg);
    if (name == "figure") return cmd_figure(cfg);
    return {kExitInvalidInput, {}, "unknown command: " + std::string(name)};
  } catch (const NonCompactError& e) {
    return {kExitInvalidInput, {}, std::string("non-compact symbol: ") + e.what()};
  } catch (const DomainError& e) {
    return {kExitInvalidInput, {}, e.what()};
  } catch (const ResourceError& e) {
    return {kExitResourceLimit, {}, e.what()};
  } catch (const BudgetExhausted& e) {
    return {kExitResourceLimit, {}, std::string(e.what()) + " (achieved error " + format_number(e.achieved_error()) + ")"};
  } catch (const ConvergenceError& e) {
    return {kExitVerificationFailed, {}, e.what()};
  }
}

}  // namespace dircomp
