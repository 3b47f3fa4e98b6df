#pragma once

#include <optional>

#include "dircomp/special_functions.hpp"
#include "dircomp/symbol.hpp"

namespace dircomp {

/// P(r) = |c2| r^2 + (1 - 2 sigma1) r + |c2|
double schur_polynomial(double r, double sigma1, double c2_abs);

/// Smaller positive root of P, in the cancellation-free form
/// r = 2|c2| / ((2 sigma1 - 1) + sqrt((2 sigma1 - 1)^2 - 4|c2|^2)).
///
/// Throws DomainError for c2_abs <= 0 or sigma1 < 1/2 + c2_abs (beyond
/// kEqualityTolerance). Result lies in (0, 1].
double schur_radius(double sigma1, double c2_abs);

struct KernelLowerBound {
  double value = 0.0;   // sup over x > 1/2 of zeta(2 sigma1 - 2|c2| q^-x) / zeta(2x)
  double argmax = 0.0;  // located maximizer; +inf when the x -> inf limit wins
};

struct NormBoundReport {
  SymbolClass symbol_class = SymbolClass::Compact;
  std::optional<double> schur_r;  // empty for constant symbols
  CertifiedValue lower_sq;        // zeta(2 sigma1)
  CertifiedValue upper_sq;        // zeta(2 sigma1 - r|c2|)
  KernelLowerBound kernel;
};

/// Two-sided bound on ||C_phi||^2 plus the reproducing-kernel lower bound.
/// Depends on the symbol only through (Re c1, |c2|, q).
NormBoundReport norm_bounds(const DirichletSymbol& sym, const PrecisionBudget& budget = {});

/// Reproducing-kernel lower bound (S*_phi)^2, by a log-spaced scan of
/// x - 1/2 in [1e-6, 59.5] (512 points), golden-section refinement to width
/// 1e-10 around the best point, and the analytic limit zeta(2 sigma1).
KernelLowerBound kernel_lower_bound(const DirichletSymbol& sym,
                                    const PrecisionBudget& budget = {});

/// a_{N+1}(C_phi) <= prefactor * ratio^N.
struct ApproxNumberBound {
  double prefactor = 1.0;
  double ratio = 0.0;

  double bound_at(int n) const;
};

/// Throws NonCompactError unless 2 Re c1 - 2|c2| - 1 > 0 (and the symbol is not
/// classified Boundary).
ApproxNumberBound approx_number_bound(const DirichletSymbol& sym);

}  // namespace dircomp
