#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dircomp/special_functions.hpp"
#include "dircomp/symbol.hpp"

namespace dircomp {

/// Default cap on (I+1)*J; overridden by the DIRCOMP_MAX_ENTRIES environment variable.
inline constexpr std::size_t kDefaultMaxEntries = 100'000'000;

/// Entry cap from DIRCOMP_MAX_ENTRIES, or kDefaultMaxEntries when unset or unparsable.
std::size_t max_matrix_entries();

/// Rows i = 0..I and columns j = 1..J of the matrix of C_phi in the bases
/// {(q^i)^-s} (rows) and {j^-s} (columns):
///   a_{0,1} = 1, a_{i,1} = 0 (i > 0), a_{i,j} = j^(-c1) (-c2 ln j)^i / i!  (j > 1).
/// Immutable once built.
class TruncatedMatrix {
 public:
  TruncatedMatrix(DirichletSymbol sym, int max_row, int cols, double tail_bound,
                  std::vector<Complex> entries);

  int max_row() const { return max_row_; }
  int rows() const { return max_row_ + 1; }
  int cols() const { return cols_; }

  /// Entry a_{i,j} with the column index j in 1..J.
  Complex at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + (j - 1)]; }
  std::span<const Complex> row(int i) const {
    return {entries_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
  }
  std::span<const Complex> entries() const { return entries_; }

  const DirichletSymbol& symbol() const { return symbol_; }

  /// Certified bound on the operator norm of the discarded part; +inf when none exists.
  double tail_bound() const { return tail_bound_; }

 private:
  DirichletSymbol symbol_;
  int max_row_;
  int cols_;
  double tail_bound_;
  std::vector<Complex> entries_;
};

struct Truncation {
  int max_row = 60;
  int cols = 5000;
};

/// I = 60, J = 5000 when 2|c2|/(2 Re c1 - 1) <= 1/2, otherwise I grows as
/// log(tol)/log(ratio). Boundary symbols get I = 200, J = 20000; constant
/// symbols need only the first row.
Truncation default_truncation(const DirichletSymbol& sym, double tol = 1e-12);

/// Builds the (I+1) x J truncation in log space. Throws DomainError for I < 0
/// or J < 1 and ResourceError when (I+1)*J exceeds entry_cap.
TruncatedMatrix build_matrix(const DirichletSymbol& sym, int max_row, int cols,
                             const PrecisionBudget& budget = {},
                             std::size_t entry_cap = max_matrix_entries());

/// Certified bound on ||A - A_truncated||, as the root-sum of squares of
///  - the Hilbert-Schmidt norm of rows i > I, through
///    sum_{k>I} (2|c2|/(2 sigma1 - 1))^{2k} (2 sigma1)/(2 sigma1 - 1), and
///  - the Hilbert-Schmidt norm of columns j > J in rows i <= I, through
///    incomplete-gamma tails of sum_j (ln j)^{2i} j^{-2 sigma1}.
/// Returns +inf when the row ratio is >= 1 (Boundary symbols).
double tail_bounds(const DirichletSymbol& sym, int max_row, int cols,
                   const PrecisionBudget& budget = {});

struct NormEstimate {
  double lower = 0.0;  // largest singular value of the truncation
  double upper = 0.0;  // lower + tail_bound
  int iterations = 0;
  bool converged = false;
};

/// Power iteration on the Gram matrix of the truncation (A A* or A* A, whichever
/// is smaller), from the normalized all-ones vector, stopping when the Rayleigh
/// quotient changes by at most tol relative.
NormEstimate operator_norm_estimate(const TruncatedMatrix& m, double tol = 1e-13,
                                    int max_iter = 100'000);

struct SingularSpectrum {
  std::vector<double> values;  // non-increasing
  int rows = 0;
  int cols = 0;
  std::vector<bool> converged;
};

/// Largest `count` singular values: Householder QR of the tall orientation,
/// then one-sided (Hestenes) Jacobi on the triangular factor.
SingularSpectrum singular_values(const TruncatedMatrix& m, int count);

struct SchurCertificate {
  double r = 0.0;
  double alpha = 1.0;
  CertifiedValue beta;              // zeta(2 sigma1 - r|c2|)
  double max_column_residual = 0.0;  // max_j (sum_i |a_ij| q_i + tail) / (alpha p_j) - 1
  double max_row_residual = 0.0;     // max_{i<=I} (sum_j |a_ij| p_j + tail) / (beta q_i) - 1
  double column_tail = 0.0;          // largest relative remainder added to a column sum
  double row_tail = 0.0;             // largest relative tail added to a row sum
  double slack = 0.0;
  int failing_row = -1;  // first row violating the inequality, -1 if none
  bool verdict = false;
  std::optional<double> norm_bound;  // sqrt(alpha beta) when verdict holds
};

/// Checks the two Schur-test inequalities with alpha = 1, beta = zeta(2 sigma1 - r|c2|),
/// p_j = j^(r|c2| - sigma1), q_i = r^i, for columns j <= J and rows i <= I.
/// Residuals are relative; slack = rel_tol + the relative certification error of beta.
/// Throws DomainError for constant symbols, r <= 0, or 2 sigma1 - r|c2| <= 1.
SchurCertificate schur_certificate(const DirichletSymbol& sym, double r, int max_row, int cols,
                                   const PrecisionBudget& budget = {});

/// "I J" then (I+1)*J lines "re im", row-major, 17 significant digits.
void write_matrix(std::ostream& out, const TruncatedMatrix& m);

}  // namespace dircomp
