#pragma once

#include <complex>
#include <string_view>
#include <vector>

namespace dircomp {

using Complex = std::complex<double>;

/// Tolerance for the Constant/Boundary equality tests and the validity check.
inline constexpr double kEqualityTolerance = 1e-12;

enum class SymbolClass { Constant, Boundary, Compact };

std::string_view to_string(SymbolClass c);

/// phi(s) = c1 + c2 q^(-s) with Re c1 >= 1/2 + |c2| and q >= 2.
///
/// c2 is held in polar form so that the modulus seen by the norm formulas is
/// exactly the one supplied, independent of its argument.
class DirichletSymbol {
 public:
  /// Throws DomainError on non-finite input, q < 2, or Re c1 < 1/2 + |c2|.
  DirichletSymbol(Complex c1, Complex c2, int q = 2);

  static DirichletSymbol from_polar(double c1_re, double c1_im, double c2_abs, double c2_arg,
                                    int q = 2);

  Complex c1() const { return c1_; }
  Complex c2() const { return std::polar(c2_abs_, c2_arg_); }
  int q() const { return q_; }

  double sigma1() const { return c1_.real(); }
  double c2_abs() const { return c2_abs_; }
  double c2_arg() const { return c2_arg_; }

  /// phi'(s) = -c2 ln(q) q^(-s)
  Complex derivative(Complex s) const;

 private:
  DirichletSymbol(Complex c1, double c2_abs, double c2_arg, int q);
  void validate() const;

  Complex c1_;
  double c2_abs_;
  double c2_arg_;
  int q_;
};

/// c1 + c2 q^(-s), with q^(-s) = exp(-s ln q).
Complex evaluate(const DirichletSymbol& sym, Complex s);

SymbolClass classify(const DirichletSymbol& sym);

struct FixedPointResult {
  Complex alpha;       // fixed point in Re s > 1/2
  Complex derivative;  // phi'(alpha)
  int iterations = 0;
  double residual = 0.0;  // |phi(alpha) - alpha|
};

/// Fixed point of phi in Re s > 1/2.
///
/// Plain iteration alpha <- phi(alpha) from alpha = c1, falling back to damped
/// Newton on alpha - phi(alpha); 10^4 iterations each. Throws ConvergenceError
/// if both fail, or if a Compact symbol yields |phi'(alpha)| >= 1.
FixedPointResult fixed_point(const DirichletSymbol& sym, double tol = 1e-13);

/// {0, 1} and the powers phi'(alpha)^k, k = 1..k_max, by decreasing modulus.
///
/// Defined for Compact and Constant symbols; Boundary symbols throw
/// NonCompactError. Exact duplicates (including underflowed powers) are dropped.
std::vector<Complex> spectrum_formula(const DirichletSymbol& sym, int k_max);

}  // namespace dircomp
