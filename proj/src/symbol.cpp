#include "dircomp/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dircomp/errors.hpp"

namespace dircomp {

namespace {

constexpr int kMaxIterations = 10'000;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

std::string_view to_string(SymbolClass c) {
  switch (c) {
    case SymbolClass::Constant:
      return "Constant";
    case SymbolClass::Boundary:
      return "Boundary";
    case SymbolClass::Compact:
      return "Compact";
  }
  return "Unknown";
}

DirichletSymbol::DirichletSymbol(Complex c1, Complex c2, int q)
    : DirichletSymbol(c1, std::abs(c2), std::arg(c2), q) {}

DirichletSymbol::DirichletSymbol(Complex c1, double c2_abs, double c2_arg, int q)
    : c1_(c1), c2_abs_(c2_abs), c2_arg_(c2_arg), q_(q) {
  validate();
}

DirichletSymbol DirichletSymbol::from_polar(double c1_re, double c1_im, double c2_abs,
                                            double c2_arg, int q) {
  if (c2_abs < 0.0) throw DomainError("symbol: |c2| must be non-negative");
  return DirichletSymbol(Complex(c1_re, c1_im), c2_abs, c2_arg, q);
}

void DirichletSymbol::validate() const {
  if (!finite(c1_) || !std::isfinite(c2_abs_) || !std::isfinite(c2_arg_)) {
    throw DomainError("symbol: coefficients must be finite");
  }
  if (q_ < 2) throw DomainError("symbol: q must be an integer >= 2");
  if (!(c1_.real() > 0.5) || c1_.real() < 0.5 + c2_abs_ - kEqualityTolerance) {
    throw DomainError("symbol violates Re c1 >= 1/2 + |c2|");
  }
}

Complex DirichletSymbol::derivative(Complex s) const {
  const double log_q = std::log(static_cast<double>(q_));
  return -c2() * log_q * std::exp(-s * log_q);
}

Complex evaluate(const DirichletSymbol& sym, Complex s) {
  if (sym.c2_abs() == 0.0) return sym.c1();
  return sym.c1() + sym.c2() * std::exp(-s * std::log(static_cast<double>(sym.q())));
}

SymbolClass classify(const DirichletSymbol& sym) {
  if (sym.c2_abs() <= kEqualityTolerance) return SymbolClass::Constant;
  if (std::abs(sym.sigma1() - 0.5 - sym.c2_abs()) <= kEqualityTolerance) {
    return SymbolClass::Boundary;
  }
  return SymbolClass::Compact;
}

FixedPointResult fixed_point(const DirichletSymbol& sym, double tol) {
  if (!(tol > 0.0)) throw DomainError("fixed_point: tolerance must be positive");
  const SymbolClass cls = classify(sym);
  if (cls == SymbolClass::Constant) return {sym.c1(), Complex(0.0), 0, 0.0};

  auto residual = [&](Complex a) { return std::abs(evaluate(sym, a) - a); };
  auto finish = [&](Complex a, int iterations) {
    FixedPointResult r{a, sym.derivative(a), iterations, residual(a)};
    if (cls == SymbolClass::Compact && !(std::abs(r.derivative) < 1.0)) {
      throw ConvergenceError("fixed_point: |phi'(alpha)| >= 1 for a compact symbol");
    }
    return r;
  };

  Complex alpha = sym.c1();
  for (int it = 1; it <= kMaxIterations; ++it) {
    const Complex next = evaluate(sym, alpha);
    if (!finite(next)) break;
    alpha = next;
    if (residual(alpha) <= tol) return finish(alpha, it);
  }

  // Damped Newton on F(a) = a - phi(a), F'(a) = 1 - phi'(a).
  alpha = sym.c1();
  for (int it = 1; it <= kMaxIterations; ++it) {
    const Complex f = alpha - evaluate(sym, alpha);
    const double f_norm = std::abs(f);
    if (f_norm <= tol) return finish(alpha, it - 1 + kMaxIterations);
    const Complex step = f / (1.0 - sym.derivative(alpha));
    double damping = 1.0;
    Complex trial = alpha - step;
    while (damping > 1e-8 && !(residual(trial) < f_norm && trial.real() > 0.5)) {
      damping *= 0.5;
      trial = alpha - damping * step;
    }
    if (damping <= 1e-8) break;
    alpha = trial;
  }
  throw ConvergenceError("fixed_point: neither iteration nor damped Newton converged");
}

std::vector<Complex> spectrum_formula(const DirichletSymbol& sym, int k_max) {
  if (classify(sym) == SymbolClass::Boundary) {
    throw NonCompactError("spectrum_formula: defined for compact symbols only");
  }
  if (k_max < 0) throw DomainError("spectrum_formula: k_max must be non-negative");

  const Complex d = fixed_point(sym).derivative;
  std::vector<Complex> out{Complex(1.0)};
  Complex power(1.0);
  for (int k = 1; k <= k_max; ++k) {
    power *= d;
    if (power == Complex(0.0)) break;
    out.push_back(power);
  }
  out.push_back(Complex(0.0));
  std::stable_sort(out.begin(), out.end(),
                   [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dircomp
