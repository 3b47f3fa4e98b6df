#include "dircomp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dircomp/errors.hpp"

namespace dircomp {

namespace {

constexpr int kKernelGridPoints = 512;
constexpr double kKernelGridMin = 1e-6;
constexpr double kKernelGridMax = 59.5;
constexpr double kGoldenWidth = 1e-10;

}  // namespace

double schur_polynomial(double r, double sigma1, double c2_abs) {
  return c2_abs * r * r + (1.0 - 2.0 * sigma1) * r + c2_abs;
}

double schur_radius(double sigma1, double c2_abs) {
  if (!(c2_abs > 0.0)) throw DomainError("schur_radius: requires |c2| > 0");
  if (sigma1 < 0.5 + c2_abs - kEqualityTolerance) {
    throw DomainError("schur_radius: requires Re c1 >= 1/2 + |c2|");
  }
  // Boundary symbols (same tolerance as classify) have the double root r = 1.
  if (std::abs(sigma1 - 0.5 - c2_abs) <= kEqualityTolerance) return 1.0;
  const double b = 2.0 * sigma1 - 1.0;
  const double disc = std::max(b * b - 4.0 * c2_abs * c2_abs, 0.0);
  return std::min(2.0 * c2_abs / (b + std::sqrt(disc)), 1.0);
}

KernelLowerBound kernel_lower_bound(const DirichletSymbol& sym, const PrecisionBudget& budget) {
  const double two_sigma = 2.0 * sym.sigma1();
  const double limit = zeta(two_sigma, budget).value;
  if (sym.c2_abs() == 0.0) return {limit, std::numeric_limits<double>::infinity()};

  const double log_q = std::log(static_cast<double>(sym.q()));
  auto ratio = [&](double x) {
    const double num = zeta(two_sigma - 2.0 * sym.c2_abs() * std::exp(-x * log_q), budget).value;
    return num / zeta(2.0 * x, budget).value;
  };

  std::vector<double> xs(kKernelGridPoints);
  const double step = std::log(kKernelGridMax / kKernelGridMin) / (kKernelGridPoints - 1);
  for (int k = 0; k < kKernelGridPoints; ++k) {
    xs[k] = 0.5 + kKernelGridMin * std::exp(k * step);
  }

  int best = 0;
  double best_value = -1.0;
  for (int k = 0; k < kKernelGridPoints; ++k) {
    const double v = ratio(xs[k]);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }

  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, kKernelGridPoints - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = ratio(c);
  double fd = ratio(d);
  while (b - a > kGoldenWidth) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = ratio(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = ratio(d);
    }
  }
  KernelLowerBound out{best_value, xs[best]};
  const double refined_x = 0.5 * (a + b);
  const double refined = ratio(refined_x);
  if (refined > out.value) out = {refined, refined_x};
  if (limit >= out.value) out = {limit, std::numeric_limits<double>::infinity()};
  return out;
}

NormBoundReport norm_bounds(const DirichletSymbol& sym, const PrecisionBudget& budget) {
  NormBoundReport report;
  report.symbol_class = classify(sym);
  const double two_sigma = 2.0 * sym.sigma1();
  report.lower_sq = zeta(two_sigma, budget);
  if (report.symbol_class == SymbolClass::Constant) {
    report.upper_sq = report.lower_sq;
  } else {
    const double r = schur_radius(sym.sigma1(), sym.c2_abs());
    report.schur_r = r;
    report.upper_sq = zeta(two_sigma - r * sym.c2_abs(), budget);
  }
  report.kernel = kernel_lower_bound(sym, budget);
  return report;
}

double ApproxNumberBound::bound_at(int n) const {
  if (n < 0) throw DomainError("bound_at: N must be non-negative");
  return prefactor * std::pow(ratio, n);
}

ApproxNumberBound approx_number_bound(const DirichletSymbol& sym) {
  const double b = 2.0 * sym.sigma1() - 1.0;
  const double two_c2 = 2.0 * sym.c2_abs();
  if (classify(sym) == SymbolClass::Boundary || !(b - two_c2 > 0.0)) {
    throw NonCompactError("approximation-number bound requires 2 Re c1 - 2|c2| - 1 > 0");
  }
  ApproxNumberBound out;
  out.ratio = two_c2 / b;
  out.prefactor = std::sqrt(b * (b + 1.0) / ((b - two_c2) * (b + two_c2)));
  return out;
}

}  // namespace dircomp
