#include "dircomp/operator_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "dircomp/errors.hpp"
#include "summation.hpp"

namespace dircomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiTol = 1e-14;
// extra sweeps granted to rounding-level columns once the rest are orthogonal
constexpr int kNoiseSweeps = 10;

// Principal argument of -c2, in (-pi, pi].
double neg_arg(const DirichletSymbol& sym) {
  double a = sym.c2_arg() + std::numbers::pi;
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

// Dense column-major m x n complex matrix used by the SVD path.
struct ColumnMajor {
  int m = 0;
  int n = 0;
  std::vector<Complex> data;

  Complex* col(int k) { return data.data() + static_cast<std::size_t>(k) * m; }
};

Complex dot(const Complex* x, const Complex* y, int len) {
  Complex acc(0.0);
  for (int k = 0; k < len; ++k) acc += std::conj(x[k]) * y[k];
  return acc;
}

double norm_sq(const Complex* x, int len) {
  double acc = 0.0;
  for (int k = 0; k < len; ++k) acc += std::norm(x[k]);
  return acc;
}

double max_abs(const Complex* x, int len) {
  double m = 0.0;
  for (int k = 0; k < len; ++k) m = std::max({m, std::abs(x[k].real()), std::abs(x[k].imag())});
  return m;
}

// Euclidean norm without underflow of the squares.
double norm2(const Complex* x, int len) {
  const double scale = max_abs(x, len);
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (int k = 0; k < len; ++k) acc += std::norm(x[k] / scale);
  return scale * std::sqrt(acc);
}

// Upper triangular factor of a Householder QR of the tall matrix b (m >= n), column-major n x n.
std::vector<Complex> householder_r(ColumnMajor b) {
  const int m = b.m;
  const int n = b.n;
  std::vector<Complex> v(static_cast<std::size_t>(m));
  for (int k = 0; k < n; ++k) {
    Complex* x = b.col(k) + k;
    const int len = m - k;
    const double xnorm = norm2(x, len);
    if (xnorm == 0.0) continue;
    const Complex phase = (x[0] == Complex(0.0)) ? Complex(1.0) : x[0] / std::abs(x[0]);
    const Complex alpha = -phase * xnorm;
    for (int t = 0; t < len; ++t) v[t] = x[t];
    v[0] -= alpha;
    const double vnorm = norm2(v.data(), len);
    if (vnorm == 0.0) continue;
    for (int t = 0; t < len; ++t) v[t] /= vnorm;
    for (int c = k; c < n; ++c) {
      Complex* y = b.col(c) + k;
      const Complex w = 2.0 * dot(v.data(), y, len);
      for (int t = 0; t < len; ++t) y[t] -= w * v[t];
    }
  }
  std::vector<Complex> r(static_cast<std::size_t>(n) * n, Complex(0.0));
  for (int c = 0; c < n; ++c) {
    for (int row = 0; row <= c; ++row) r[static_cast<std::size_t>(c) * n + row] = b.col(c)[row];
  }
  return r;
}

// One-sided Jacobi on the columns of an n x n column-major matrix; returns column norms.
// Pair statistics are formed on columns scaled to unit max-entry, so squares of
// small columns do not underflow. Columns below kNegligibleNorm carry too few
// significant bits to orthogonalize and are left alone. Columns at or below
// noise_floor = n eps max-norm are rounding-level and can keep shrinking; the
// sweeps stop a few sweeps after every pair above that level is orthogonal, and `converged`
// reports whether the noise-level columns settled as well.
std::vector<double> hestenes_jacobi(std::vector<Complex> a, int n, bool& converged, double& noise_floor) {
  constexpr double kNegligibleNorm = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  auto col = [&](int k) { return a.data() + static_cast<std::size_t>(k) * n; };
  std::vector<Complex> sp(static_cast<std::size_t>(n));
  std::vector<Complex> sq(static_cast<std::size_t>(n));
  converged = false;
  noise_floor = 0.0;
  int settled_sweeps = 0;
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double largest = 0.0;
    for (int k = 0; k < n; ++k) largest = std::max(largest, norm2(col(k), n));
    noise_floor = n * std::numeric_limits<double>::epsilon() * largest;
    bool rotated = false;
    bool rotated_significant = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        Complex* cp = col(p);
        Complex* cq = col(q);
        const double scale_p = max_abs(cp, n);
        const double scale_q = max_abs(cq, n);
        if (scale_p == 0.0 || scale_q == 0.0) continue;
        for (int k = 0; k < n; ++k) {
          sp[k] = cp[k] / scale_p;
          sq[k] = cq[k] / scale_q;
        }
        const double alpha = norm_sq(sp.data(), n);
        const double beta = norm_sq(sq.data(), n);
        if (scale_p * std::sqrt(alpha) < kNegligibleNorm || scale_q * std::sqrt(beta) < kNegligibleNorm) continue;
        const Complex gamma = dot(sp.data(), sq.data(), n);
        const double g = std::abs(gamma);
        if (g <= kJacobiTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        if (std::min(scale_p * std::sqrt(alpha), scale_q * std::sqrt(beta)) > noise_floor) rotated_significant = true;
        // Rotate the phase of column q so that <cp, cq> becomes real, then a real rotation.
        const Complex unphase = std::conj(gamma) / g;
        const double ratio = scale_q / scale_p;
        const double zeta = (beta * ratio - alpha / ratio) / (2.0 * g);
        const double t = std::isinf(zeta) ? 0.0
                         : (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int k = 0; k < n; ++k) {
          const Complex xp = cp[k];
          const Complex xq = cq[k] * unphase;
          cp[k] = c * xp - s * xq;
          cq[k] = s * xp + c * xq;
        }
      }
    }
    converged = !rotated;
    if (converged) break;
    if (!rotated_significant && ++settled_sweeps > kNoiseSweeps) break;
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[k] = norm2(col(k), n);
  return out;
}

}  // namespace

std::size_t max_matrix_entries() {
  if (const char* env = std::getenv("DIRCOMP_MAX_ENTRIES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxEntries;
}

TruncatedMatrix::TruncatedMatrix(DirichletSymbol sym, int max_row, int cols, double tail_bound,
                                 std::vector<Complex> entries)
    : symbol_(sym), max_row_(max_row), cols_(cols), tail_bound_(tail_bound),
      entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(rows()) * cols_) {
    throw DomainError("TruncatedMatrix: entry count does not match dimensions");
  }
}

Truncation default_truncation(const DirichletSymbol& sym, double tol) {
  switch (classify(sym)) {
    case SymbolClass::Constant:
      return {0, 5000};
    case SymbolClass::Boundary:
      return {200, 20000};
    case SymbolClass::Compact:
      break;
  }
  const double ratio = 2.0 * sym.c2_abs() / (2.0 * sym.sigma1() - 1.0);
  if (ratio <= 0.5) return {60, 5000};
  return {static_cast<int>(std::ceil(std::log(tol) / std::log(ratio))), 5000};
}

double tail_bounds(const DirichletSymbol& sym, int max_row, int cols,
                   const PrecisionBudget& budget) {
  if (max_row < 0 || cols < 1) throw DomainError("tail_bounds: requires I >= 0, J >= 1");
  budget.validate();
  const double two_sigma = 2.0 * sym.sigma1();
  const double b = two_sigma - 1.0;
  const double c2 = sym.c2_abs();

  double rows_sq = 0.0;
  if (c2 > 0.0) {
    const double ratio = 2.0 * c2 / b;
    if (classify(sym) == SymbolClass::Boundary || !(ratio < 1.0)) return kInf;
    const double r2 = ratio * ratio;
    rows_sq = std::pow(r2, max_row + 1.0) / (1.0 - r2) * two_sigma / b;
  }

  NeumaierSum cols_sq;
  const int last = (c2 > 0.0) ? max_row : 0;
  for (int i = 0; i <= last; ++i) {
    const double log_coeff = (i == 0) ? 0.0 : 2.0 * (i * std::log(c2) - std::lgamma(i + 1.0));
    cols_sq.add(log_moment_tail(two_sigma, 2 * i, static_cast<double>(cols), -log_coeff).upper);
  }
  return std::sqrt(rows_sq + cols_sq.result());
}

TruncatedMatrix build_matrix(const DirichletSymbol& sym, int max_row, int cols,
                             const PrecisionBudget& budget, std::size_t entry_cap) {
  if (max_row < 0 || cols < 1) throw DomainError("build_matrix: requires I >= 0, J >= 1");
  const auto row_count = static_cast<std::size_t>(max_row) + 1;
  if (row_count > entry_cap / static_cast<std::size_t>(cols)) {
    throw ResourceError("build_matrix: (I+1)*J = " + std::to_string(row_count * cols) +
                        " exceeds the entry cap " + std::to_string(entry_cap));
  }

  std::vector<double> log_fact(row_count);
  for (std::size_t i = 0; i < row_count; ++i) log_fact[i] = std::lgamma(static_cast<double>(i) + 1.0);

  const double sigma = sym.sigma1();
  const double t1 = sym.c1().imag();
  const double c2 = sym.c2_abs();
  const double step_arg = neg_arg(sym);
  std::vector<Complex> entries(row_count * cols, Complex(0.0));
  entries[0] = Complex(1.0);
  for (int j = 2; j <= cols; ++j) {
    const double log_j = std::log(static_cast<double>(j));
    const double base_mod = -sigma * log_j;
    const double base_arg = -t1 * log_j;
    entries[j - 1] = std::polar(std::exp(base_mod), base_arg);
    if (c2 == 0.0) continue;
    const double log_x = std::log(c2 * log_j);
    for (int i = 1; i <= max_row; ++i) {
      const double mod = std::exp(base_mod + i * log_x - log_fact[i]);
      entries[static_cast<std::size_t>(i) * cols + (j - 1)] = std::polar(mod, base_arg + i * step_arg);
    }
  }
  return TruncatedMatrix(sym, max_row, cols, tail_bounds(sym, max_row, cols, budget),
                         std::move(entries));
}

NormEstimate operator_norm_estimate(const TruncatedMatrix& m, double tol, int max_iter) {
  if (!(tol > 0.0) || max_iter < 1) throw DomainError("operator_norm_estimate: invalid tolerance");

  // Gram matrix on the smaller side, Hermitian, row-major.
  const bool by_rows = m.rows() <= m.cols();
  const int n = by_rows ? m.rows() : m.cols();
  std::vector<Complex> gram(static_cast<std::size_t>(n) * n);
  auto g = [&](int a, int b) -> Complex& { return gram[static_cast<std::size_t>(a) * n + b]; };
  if (by_rows) {
    for (int a = 0; a < n; ++a) {
      const auto ra = m.row(a);
      for (int b = a; b < n; ++b) {
        const auto rb = m.row(b);
        NeumaierSum re;
        NeumaierSum im;
        for (int k = m.cols() - 1; k >= 0; --k) {
          const Complex t = ra[k] * std::conj(rb[k]);
          re.add(t.real());
          im.add(t.imag());
        }
        const Complex acc(re.result(), im.result());
        g(a, b) = acc;
        g(b, a) = std::conj(acc);
      }
    }
  } else {
    for (int i = 0; i < m.rows(); ++i) {
      const auto r = m.row(i);
      for (int a = 0; a < n; ++a) {
        const Complex ca = std::conj(r[a]);
        for (int b = 0; b < n; ++b) g(a, b) += ca * r[b];
      }
    }
  }

  std::vector<Complex> x(static_cast<std::size_t>(n), Complex(1.0 / std::sqrt(static_cast<double>(n))));
  std::vector<Complex> y(static_cast<std::size_t>(n));
  NormEstimate out;
  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    for (int a = 0; a < n; ++a) {
      Complex acc(0.0);
      for (int b = 0; b < n; ++b) acc += g(a, b) * x[b];
      y[a] = acc;
    }
    const double next = dot(x.data(), y.data(), n).real();
    const double ynorm = std::sqrt(norm_sq(y.data(), n));
    out.iterations = it;
    if (ynorm == 0.0) {
      lambda = 0.0;
      out.converged = true;
      break;
    }
    for (int a = 0; a < n; ++a) x[a] = y[a] / ynorm;
    const bool settled = std::abs(next - lambda) <= tol * std::abs(next);
    lambda = next;
    if (settled) {
      out.converged = true;
      break;
    }
  }
  out.lower = std::sqrt(std::max(lambda, 0.0));
  out.upper = out.lower + m.tail_bound();
  return out;
}

SingularSpectrum singular_values(const TruncatedMatrix& m, int count) {
  const int small = std::min(m.rows(), m.cols());
  if (count < 0 || count > small) {
    throw DomainError("singular_values: count must lie in [0, min(I+1, J)]");
  }
  // Tall orientation: A* (J x (I+1)) when rows <= cols, otherwise A itself.
  ColumnMajor tall;
  if (m.rows() <= m.cols()) {
    tall = {m.cols(), m.rows(), std::vector<Complex>(m.entries().size())};
    for (int i = 0; i < m.rows(); ++i) {
      const auto r = m.row(i);
      Complex* c = tall.col(i);
      for (int j = 0; j < m.cols(); ++j) c[j] = std::conj(r[j]);
    }
  } else {
    tall = {m.rows(), m.cols(), std::vector<Complex>(m.entries().size())};
    for (int i = 0; i < m.rows(); ++i) {
      const auto r = m.row(i);
      for (int j = 0; j < m.cols(); ++j) tall.col(j)[i] = r[j];
    }
  }

  bool converged = false;
  double noise_floor = 0.0;
  std::vector<double> sv = hestenes_jacobi(householder_r(std::move(tall)), small, converged, noise_floor);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  sv.resize(static_cast<std::size_t>(count));

  SingularSpectrum out;
  out.values = std::move(sv);
  out.rows = m.rows();
  out.cols = m.cols();
  out.converged.reserve(out.values.size());
  for (double v : out.values) out.converged.push_back(converged || v > noise_floor);
  return out;
}

namespace {

// sum_{n>=N} n^-s up to the B2 term, an overestimate for real s > 1.
double euler_maclaurin_tail(double s, double N) {
  const double n_pow = std::pow(N, -s);
  return N * n_pow / (s - 1.0) + 0.5 * n_pow + s * n_pow / (12.0 * N);
}

}  // namespace

SchurCertificate schur_certificate(const DirichletSymbol& sym, double r, int max_row, int cols,
                                   const PrecisionBudget& budget) {
  if (sym.c2_abs() == 0.0) throw DomainError("schur_certificate: constant symbols need no certificate");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("schur_certificate: r must be positive");
  if (max_row < 0 || cols < 1) throw DomainError("schur_certificate: requires I >= 0, J >= 1");
  const double sigma = sym.sigma1();
  const double c2 = sym.c2_abs();
  const double exponent = 2.0 * sigma - r * c2;
  if (!(exponent > 1.0)) throw DomainError("schur_certificate: requires 2 Re c1 - r|c2| > 1");

  SchurCertificate cert;
  cert.r = r;
  cert.alpha = 1.0;
  cert.beta = zeta(exponent, budget);
  cert.slack = budget.rel_tol + cert.beta.error_bound / cert.beta.value;
  const double log_r = std::log(r);
  const double log_c2 = std::log(c2);

  // Columns: sum_i |a_ij| r^i against p_j = j^(r|c2| - sigma), summed until the
  // Taylor remainder of exp(r|c2| ln j) is negligible. Column j = 1 is exact.
  cert.max_column_residual = 0.0;
  for (int j = 2; j <= cols; ++j) {
    const double log_j = std::log(static_cast<double>(j));
    const double log_p = (r * c2 - sigma) * log_j;
    const double x = r * c2 * log_j;
    const double log_x = std::log(x);
    const double log_step = log_c2 + std::log(log_j) + log_r;
    NeumaierSum acc;
    int i = 0;
    double log_term = 0.0;
    for (;; ++i) {
      // |a_ij| r^i / p_j = x^i / i! * exp(-x)
      log_term = -sigma * log_j + i * log_step - std::lgamma(i + 1.0) - log_p;
      acc.add(std::exp(log_term));
      if (i > x && log_term < -45.0) break;
    }
    // Lagrange remainder x^(n+1)/(n+1)!, relative to e^x.
    const double remainder = std::exp((i + 1.0) * log_x - std::lgamma(i + 2.0));
    cert.column_tail = std::max(cert.column_tail, remainder);
    cert.max_column_residual = std::max(cert.max_column_residual, acc.result() + remainder - 1.0);
  }

  // Rows: (|c2|^i / i!) sum_j (ln j)^i j^-exponent against beta r^i, with a
  // certified tail for j > J.
  cert.max_row_residual = -kInf;
  const double log_beta = std::log(cert.beta.value);
  for (int i = 0; i <= max_row; ++i) {
    const double log_coeff = (i == 0) ? 0.0 : i * log_c2 - std::lgamma(i + 1.0);
    const double log_rhs = log_beta + i * log_r;
    NeumaierSum acc;
    if (i == 0) acc.add(std::exp(-log_rhs));
    for (int j = 2; j <= cols; ++j) {
      const double log_j = std::log(static_cast<double>(j));
      const double lt = (i == 0) ? 0.0 : i * std::log(log_j);
      acc.add(std::exp(log_coeff + lt - exponent * log_j - log_rhs));
    }
    // Row 0 holds with equality, so its tail needs Euler-Maclaurin accuracy;
    // truncating after the B2 term overestimates, which keeps it an upper bound.
    const double tail = (i == 0) ? euler_maclaurin_tail(exponent, cols + 1.0) / cert.beta.value
                                 : log_moment_tail(exponent, i, static_cast<double>(cols), log_rhs - log_coeff).upper;
    cert.row_tail = std::max(cert.row_tail, tail);
    const double residual = acc.result() + tail - 1.0;
    if (residual > cert.slack && cert.failing_row < 0) cert.failing_row = i;
    cert.max_row_residual = std::max(cert.max_row_residual, residual);
  }

  cert.verdict = cert.max_column_residual <= cert.slack && cert.max_row_residual <= cert.slack;
  if (cert.verdict) cert.norm_bound = std::sqrt(cert.alpha * cert.beta.value);
  return cert;
}

void write_matrix(std::ostream& out, const TruncatedMatrix& m) {
  out << m.max_row() << ' ' << m.cols() << '\n';
  char buf[64];
  for (const Complex& z : m.entries()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", z.real(), z.imag());
    out << buf;
  }
}

}  // namespace dircomp
