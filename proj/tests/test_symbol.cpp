#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dircomp/errors.hpp"
#include "dircomp/symbol.hpp"

using namespace dircomp;

TEST_CASE("validity") {
  CHECK_NOTHROW(DirichletSymbol(2.0, 0.5));
  CHECK_NOTHROW(DirichletSymbol(1.0, 0.5));
  CHECK_NOTHROW(DirichletSymbol(0.75, 0.0));
  CHECK_THROWS_AS(DirichletSymbol(0.6, 0.5), DomainError);
  CHECK_THROWS_AS(DirichletSymbol(2.0, 0.5, 1), DomainError);
  CHECK_THROWS_AS(DirichletSymbol(Complex(NAN, 0.0), 0.5), DomainError);
  CHECK_THROWS_AS(DirichletSymbol::from_polar(2.0, 0.0, -0.1, 0.0), DomainError);
  CHECK_THROWS_AS(DirichletSymbol::from_polar(2.0, 0.0, 0.5, INFINITY), DomainError);
}

TEST_CASE("evaluate") {
  const DirichletSymbol constant(2.0, 0.0);
  CHECK(evaluate(constant, Complex(0.3, -7.0)) == Complex(2.0, 0.0));

  const DirichletSymbol sym(1.0, 0.5);
  CHECK(std::abs(evaluate(sym, 1.0) - Complex(1.25, 0.0)) <= 1e-15);
  CHECK(std::abs(evaluate(sym, 200.0) - Complex(1.0, 0.0)) <= 1e-15);
  // 1 + 0.5 * 2^(-i pi / ln 2) = 1 + 0.5 e^(-i pi) = 0.5
  CHECK(std::abs(evaluate(sym, Complex(0.0, M_PI / std::log(2.0))) - Complex(0.5, 0.0)) <= 1e-15);
}

TEST_CASE("classify") {
  CHECK(classify(DirichletSymbol(1.0, 0.5)) == SymbolClass::Boundary);
  CHECK(classify(DirichletSymbol(2.0, 0.5)) == SymbolClass::Compact);
  CHECK(classify(DirichletSymbol(0.75, 0.0)) == SymbolClass::Constant);
  CHECK(classify(DirichletSymbol(Complex(1.0, 3.0), Complex(0.0, 0.5))) == SymbolClass::Boundary);
  CHECK(classify(DirichletSymbol::from_polar(1.0 + 1e-13, 0.0, 0.5, 1.0)) == SymbolClass::Boundary);
  CHECK(classify(DirichletSymbol::from_polar(1.0 + 1e-9, 0.0, 0.5, 1.0)) == SymbolClass::Compact);
  CHECK(to_string(SymbolClass::Compact) == "Compact");
}

TEST_CASE("fixed point") {
  SUBCASE("constant") {
    const FixedPointResult fp = fixed_point(DirichletSymbol(2.0, 0.0));
    CHECK(fp.alpha == Complex(2.0, 0.0));
    CHECK(std::abs(fp.derivative) == 0.0);
  }
  SUBCASE("real compact") {
    const DirichletSymbol sym(2.0, 0.5);
    const FixedPointResult fp = fixed_point(sym, 1e-12);
    CHECK(fp.residual < 1e-12);
    // independent iteration a <- 2 + 0.5 * 2^-a
    double a = 2.0;
    for (int k = 0; k < 200; ++k) a = 2.0 + 0.5 * std::exp2(-a);
    CHECK(std::abs(fp.alpha.real() - a) <= 1e-12);
    CHECK(std::abs(fp.alpha.imag()) <= 1e-15);
    CHECK(fp.alpha.real() == doctest::Approx(2.115391473278).epsilon(1e-11));
    CHECK(fp.derivative.real() == doctest::Approx(-0.5 * std::log(2.0) * std::exp2(-a)).epsilon(1e-12));
    CHECK(fp.derivative.real() == doctest::Approx(-0.0800).epsilon(1e-3));
  }
  SUBCASE("complex c1") {
    const DirichletSymbol sym(Complex(1.0, 5.0), 0.25);
    const FixedPointResult fp = fixed_point(sym, 1e-13);
    CHECK(fp.alpha.real() > 0.5);
    CHECK(fp.residual < 1e-13);
    CHECK(std::abs(evaluate(sym, fp.alpha) - fp.alpha) < 1e-13);
    CHECK(std::abs(fp.derivative) < 1.0);
  }
  SUBCASE("boundary") {
    const DirichletSymbol sym(1.0, 0.5);
    const FixedPointResult fp = fixed_point(sym, 1e-12);
    CHECK(fp.alpha.real() > 0.5);
    CHECK(std::abs(evaluate(sym, fp.alpha) - fp.alpha) <= 1e-12);
  }
}

TEST_CASE("spectrum formula") {
  const DirichletSymbol sym(2.0, 0.5);
  const Complex d = fixed_point(sym).derivative;
  const auto spec = spectrum_formula(sym, 3);
  REQUIRE(spec.size() == 5);
  CHECK(spec[0] == Complex(1.0, 0.0));
  CHECK(std::abs(spec[1] - d) <= 1e-15);
  CHECK(std::abs(spec[2] - d * d) <= 1e-15);
  CHECK(std::abs(spec[3] - d * d * d) <= 1e-15);
  CHECK(spec[4] == Complex(0.0, 0.0));
  CHECK(std::abs(d) == doctest::Approx(0.0800).epsilon(1e-3));

  const auto constant = spectrum_formula(DirichletSymbol(2.0, 0.0), 5);
  REQUIRE(constant.size() == 2);
  CHECK(constant[0] == Complex(1.0, 0.0));
  CHECK(constant[1] == Complex(0.0, 0.0));

  CHECK_THROWS_AS(spectrum_formula(DirichletSymbol(1.0, 0.5), 3), NonCompactError);
}

namespace {

DirichletSymbol random_valid(std::mt19937_64& rng, bool compact) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double c2 = 2.0 * u(rng);
  const double sigma = 0.5 + c2 + (compact ? 1e-3 + 3.0 * u(rng) : 0.0);
  return DirichletSymbol::from_polar(sigma, 10.0 * (u(rng) - 0.5), c2, 2.0 * M_PI * u(rng),
                                     2 + static_cast<int>(5 * u(rng)));
}

}  // namespace

TEST_CASE("mapping property: Re s > 0 lands in Re > 1/2") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const DirichletSymbol sym = random_valid(rng, n % 2 == 0);
    const Complex s(1e-6 + 5.0 * u(rng), 40.0 * (u(rng) - 0.5));
    CAPTURE(n);
    CHECK(evaluate(sym, s).real() > 0.5);
  }
}

TEST_CASE("contraction and spectral radius for compact symbols") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 100; ++n) {
    const DirichletSymbol sym = random_valid(rng, true);
    REQUIRE(classify(sym) == SymbolClass::Compact);
    const FixedPointResult fp = fixed_point(sym);
    CAPTURE(n);
    CHECK(fp.residual <= 1e-13);
    CHECK(fp.alpha.real() > 0.5);
    CHECK(std::abs(fp.derivative) < 1.0);
    const auto spec = spectrum_formula(sym, 10);
    CHECK(spec.front() == Complex(1.0, 0.0));
    for (std::size_t k = 1; k < spec.size(); ++k) CHECK(std::abs(spec[k]) < 1.0);
  }
}

TEST_CASE("base q is a reparameterization of s") {
  const DirichletSymbol two(Complex(2.0, 0.3), Complex(0.4, -0.2), 2);
  const DirichletSymbol three(Complex(2.0, 0.3), Complex(0.4, -0.2), 3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n < 50; ++n) {
    const Complex s(u(rng) + 3.0, u(rng));
    const Complex lhs = evaluate(two, s);
    const Complex rhs = evaluate(three, s * std::log(2.0) / std::log(3.0));
    CHECK(std::abs(lhs - rhs) <= 1e-14 * std::abs(lhs));
  }
}
