#include "dircomp/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "dircomp/errors.hpp"
#include "summation.hpp"

namespace dircomp {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double log_sum_exp(const std::vector<double>& logs) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : logs) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  NeumaierSum acc;
  for (double v : logs) acc.add(std::exp(v - peak));
  return peak + std::log(acc.result());
}

// ln of (ln x)^m x^(-s); -inf at x = 1 when m > 0.
double log_summand(double s, int m, double x) {
  const double u = std::log(x);
  if (m == 0) return -s * u;
  if (u <= 0.0) return -std::numeric_limits<double>::infinity();
  return m * std::log(u) - s * u;
}

// ln of the summand's maximum over x >= 1, attained at ln x = m/s.
double log_summand_peak(double s, int m) {
  if (m == 0) return 0.0;
  const double u = m / s;
  return m * std::log(u) - m;
}

}  // namespace

void PrecisionBudget::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_terms < 16) {
    throw DomainError("precision budget requires abs_tol > 0, rel_tol > 0, max_terms >= 16");
  }
}

double PrecisionBudget::target(double magnitude) const {
  return std::max(abs_tol, rel_tol * std::abs(magnitude));
}

CertifiedValue zeta(double s, const PrecisionBudget& budget) {
  if (!(s > 1.0)) throw DomainError("zeta: requires s > 1");
  budget.validate();

  // zeta(s) >= max(1, 1/(s-1)) sizes the relative target.
  const double target = budget.target(std::max(1.0, 1.0 / (s - 1.0)));
  const double b4_coeff = s * (s + 1.0) * (s + 2.0) / 720.0;
  auto remainder = [&](double n) { return b4_coeff * std::pow(n, -s - 3.0); };

  double cutoff = std::ceil(std::pow(b4_coeff / target, 1.0 / (s + 3.0)));
  cutoff = std::max(cutoff, 16.0);
  if (cutoff - 1.0 > static_cast<double>(budget.max_terms)) {
    const double achieved = remainder(static_cast<double>(budget.max_terms) + 1.0);
    throw BudgetExhausted("zeta: max_terms too small for the requested tolerance", achieved);
  }
  const auto n_cut = static_cast<std::size_t>(cutoff);

  NeumaierSum acc;
  for (std::size_t n = n_cut - 1; n >= 1; --n) acc.add(std::pow(static_cast<double>(n), -s));
  const double nd = static_cast<double>(n_cut);
  const double n_pow = std::pow(nd, -s);
  acc.add(nd * n_pow / (s - 1.0));
  acc.add(0.5 * n_pow);
  acc.add(s * n_pow / (12.0 * nd));
  const double value = acc.result();
  // a few ulps for the rounded powers on top of the truncation remainder
  return {value, remainder(nd) + 4.0 * std::numeric_limits<double>::epsilon() * value};
}

double log_upper_gamma_int(int m, double z) {
  if (m < 0 || !(z >= 0.0)) throw DomainError("upper incomplete gamma: requires m >= 0, z >= 0");
  const double log_fact = std::lgamma(m + 1.0);
  if (z == 0.0) return log_fact;
  // Gamma(m+1, z) = e^(-z) sum_{k=0}^m m!/k! z^k, terms generated downward from k = m.
  std::vector<double> logs(static_cast<std::size_t>(m) + 1);
  const double log_z = std::log(z);
  logs[m] = m * log_z;
  for (int k = m; k >= 1; --k) logs[k - 1] = logs[k] + std::log(static_cast<double>(k)) - log_z;
  return -z + log_sum_exp(logs);
}

double log_power_log_integral(double s, int m, double a) {
  if (!(s > 1.0) || !(a >= 1.0)) throw DomainError("power-log integral: requires s > 1, a >= 1");
  const double z = (s - 1.0) * std::log(a);
  return log_upper_gamma_int(m, z) - (m + 1.0) * std::log(s - 1.0);
}

double log_moment_regular_threshold(double s, int m) {
  if (m == 0) return 0.0;
  const double decreasing = m / s;
  const double a = s * (s + 1.0);
  const double b = (2.0 * s + 1.0) * m;
  double convex;
  if (m == 1) {
    convex = b / a;
  } else {
    convex = (b + std::sqrt(m * (m + 4.0 * a))) / (2.0 * a);
  }
  return std::max(decreasing, convex);
}

TailBracket log_moment_tail(double s, int m, double J, double log_scale) {
  if (!(s > 1.0) || m < 0 || !(J >= 1.0)) throw DomainError("log moment tail: invalid arguments");
  const double u = std::log(J);
  auto scaled = [&](double log_v) { return std::exp(log_v - log_scale); };

  TailBracket t;
  if (u >= log_moment_regular_threshold(s, m)) {
    t.lower = scaled(log_power_log_integral(s, m, J)) - 0.5 * scaled(log_summand(s, m, J));
    t.upper = scaled(log_power_log_integral(s, m, J + 0.5));
  } else if (u >= m / s) {
    t.lower = scaled(log_power_log_integral(s, m, J + 1.0));
    t.upper = scaled(log_power_log_integral(s, m, J));
  } else {
    const double peak = scaled(log_summand_peak(s, m));
    t.lower = scaled(log_power_log_integral(s, m, J + 1.0)) - peak;
    t.upper = scaled(log_power_log_integral(s, m, J)) + peak;
  }
  t.lower = std::max(t.lower, 0.0);
  return t;
}

CertifiedValue log_moment_sum(double s, int i, const PrecisionBudget& budget) {
  if (!(s > 1.0)) throw DomainError("log_moment_sum: requires s > 1");
  if (i < 0) throw DomainError("log_moment_sum: requires i >= 0");
  budget.validate();
  if (i == 0) return zeta(s, budget);

  // Everything is carried relative to the full integral i!/(s-1)^(i+1).
  const double log_scale = std::lgamma(i + 1.0) - (i + 1.0) * std::log(s - 1.0);
  const double scale = std::exp(log_scale);
  const double target = std::max(budget.abs_tol / scale, budget.rel_tol);

  const double start = std::ceil(std::exp(log_moment_regular_threshold(s, i)));
  const auto max_terms = static_cast<double>(budget.max_terms);
  if (!(start <= max_terms)) {
    // Unimodal bracket on the whole series; the k = 1 term vanishes for i >= 1.
    const double peak = std::exp(log_summand_peak(s, i) - log_scale);
    return {scale, scale * peak};
  }

  auto cutoff = static_cast<std::size_t>(std::max(start, 16.0));
  NeumaierSum acc;
  std::size_t next = 2;
  for (;;) {
    for (; next <= cutoff; ++next) {
      acc.add(std::exp(log_summand(s, i, static_cast<double>(next)) - log_scale));
    }
    const TailBracket tail = log_moment_tail(s, i, static_cast<double>(cutoff), log_scale);
    const double half_width = 0.5 * (tail.upper - tail.lower);
    if (half_width <= target || cutoff >= budget.max_terms) {
      const double mid = acc.result() + 0.5 * (tail.upper + tail.lower);
      return {scale * mid, scale * half_width};
    }
    cutoff = std::min(cutoff * 2, budget.max_terms);
  }
}

double log_moment_bound(double s, int i, double zeta_s) {
  if (!(s > 1.0) || i < 0) throw DomainError("log_moment_bound: requires s > 1, i >= 0");
  return std::exp(std::lgamma(i + 1.0) - i * std::log(s - 1.0)) * zeta_s;
}

double lower_bound_h(double s) {
  if (!(s > 1.0)) throw DomainError("lower_bound_h: requires s > 1");
  return 1.0 / (s - 1.0) + ((s - 1.0) / s) * kInvSqrt2Pi;
}

double lower_bound_g(double x) {
  if (!(x >= 0.0)) throw DomainError("lower_bound_g: requires x >= 0");
  return (414.0 + x * (49.0 + x * (-6.0 - x))) / 720.0;
}

double lower_bound_g_factored(double x) {
  if (!(x >= 0.0)) throw DomainError("lower_bound_g: requires x >= 0");
  return 0.5 + (x + 1.0) / 12.0 - (x + 1.0) * (x + 2.0) * (x + 3.0) / 720.0;
}

double lower_bound_f(double x) {
  if (!(x >= 0.0)) throw DomainError("lower_bound_f: requires x >= 0");
  return (x / (x + 1.0)) * kInvSqrt2Pi;
}

double crossing_root(const PrecisionBudget& budget) {
  budget.validate();
  auto diff = [](double x) { return lower_bound_f(x) - lower_bound_g(x); };
  double lo = 0.1;
  double hi = 10.0;
  if (!(diff(lo) < 0.0 && diff(hi) > 0.0)) {
    throw ConvergenceError("crossing_root: f - g does not change sign on [0.1, 10]");
  }
  while (hi - lo > budget.abs_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (diff(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace dircomp
