#pragma once

#include <cstddef>

namespace dircomp {

/// Tolerances and the hard term cap that govern every summation in the library.
struct PrecisionBudget {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  std::size_t max_terms = 10'000'000;

  /// Throws DomainError unless abs_tol > 0, rel_tol > 0 and max_terms >= 16.
  void validate() const;

  /// max(abs_tol, rel_tol * magnitude)
  double target(double magnitude) const;
};

/// A real number with a certified bound on its truncation error.
///
/// The bound covers truncation only; binary64 rounding is assumed negligible
/// at the tolerances the library is used with (>= 1e-13 relative).
struct CertifiedValue {
  double value = 0.0;
  double error_bound = 0.0;

  double lo() const { return value - error_bound; }
  double hi() const { return value + error_bound; }
};

/// Riemann zeta for real s > 1 by Euler-Maclaurin summation.
///
/// Uses the cutoff corrections N^(1-s)/(s-1) + N^(-s)/2 and the B2 term; the
/// remainder is bounded by the first omitted (B4) term. Throws DomainError for
/// s <= 1 and BudgetExhausted when the required cutoff exceeds max_terms.
CertifiedValue zeta(double s, const PrecisionBudget& budget = {});

/// sum_{k>=1} (ln k)^i k^(-s), for s > 1 and i >= 0.
///
/// Direct summation up to a cutoff past the convex, decreasing part of the
/// summand, then a two-sided integral bracket on the tail expressed through
/// the upper incomplete gamma function. When the cutoff would exceed
/// max_terms the whole sum is bracketed by its integral +- the summand's
/// maximum. The achieved error is reported, never thrown.
CertifiedValue log_moment_sum(double s, int i, const PrecisionBudget& budget = {});

/// i!/(s-1)^i * zeta_s, evaluated in log space.
double log_moment_bound(double s, int i, double zeta_s);

/// h(s) = 1/(s-1) + ((s-1)/s)/sqrt(2 pi), a lower bound for zeta(s).
double lower_bound_h(double s);

/// g(x) = (414 + 49x - 6x^2 - x^3)/720.
double lower_bound_g(double x);

/// g(x) in the factored form 1/2 + (x+1)/12 - (x+1)(x+2)(x+3)/720.
double lower_bound_g_factored(double x);

/// f(x) = (x/(x+1))/sqrt(2 pi).
double lower_bound_f(double x);

/// Unique positive root of f(x) = g(x), by bisection on [0.1, 10] to budget.abs_tol.
double crossing_root(const PrecisionBudget& budget = {});

// Incomplete gamma and power-log integrals.

/// ln Gamma(m+1, z) for integer m >= 0 and z >= 0.
double log_upper_gamma_int(int m, double z);

/// ln of the integral of (ln x)^m x^(-s) over [a, inf), a >= 1, s > 1.
double log_power_log_integral(double s, int m, double a);

struct TailBracket {
  double lower = 0.0;
  double upper = 0.0;
};

/// Two-sided bound on sum_{k>J} (ln k)^m k^(-s), multiplied by exp(-log_scale).
///
/// Valid for every J >= 1: uses the trapezoid/midpoint bracket where the
/// summand is convex and decreasing on [J, inf), the plain integral bracket
/// where it is only decreasing, and the unimodal bracket (integral +- max)
/// otherwise.
TailBracket log_moment_tail(double s, int m, double J, double log_scale = 0.0);

/// Smallest u >= 0 beyond which (ln x)^m x^(-s) is convex and decreasing in x,
/// expressed as u = ln x.
double log_moment_regular_threshold(double s, int m);

}  // namespace dircomp
