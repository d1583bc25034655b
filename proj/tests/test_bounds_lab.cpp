#include "doctest.h"

#include "epstein/ball.hpp"
#include "epstein/bounds_lab.hpp"
#include "epstein/errors.hpp"
#include "epstein/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace epstein;

namespace {

SymIntegralSpec spec(int n, std::vector<int> e, double c = 1.0, double delta = 1.0) {
  SymIntegralSpec s;
  s.n = n;
  s.c = c;
  s.delta = delta;
  s.exponents = std::move(e);
  return s;
}

}  // namespace

TEST_SUITE("bounds_lab") {

TEST_CASE("f_star") {
  CHECK(f_star(1.0, 2, 1.0, std::numbers::pi) == doctest::Approx(0.25));
  CHECK(f_star(1.0, 2, 1.5, std::numbers::pi) == doctest::Approx(std::pow(2.0, -3.0)));
  const double r = truncation_radius(5, 2.0);
  CHECK(f_star(0.0, 5, 1.0, 2.0) == doctest::Approx(std::pow(r, -10.0)));
  const double x = 1e3;
  CHECK(f_star(x, 5, 1.0, 2.0) / std::pow(x, -10.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f_star(0.5, 4, 1.0, 1.0) > f_star(0.6, 4, 1.0, 1.0));
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(sym_integral_4(spec(1, {1, 1, 1, 1})), DomainError);
  CHECK_THROWS_AS(sym_integral_4(spec(3, {1, 1, 1})), DomainError);
  CHECK_THROWS_AS(sym_integral_3(spec(3, {1, 1, 1}, 0.5)), DomainError);
  CHECK_THROWS_AS(sym_integral_3(spec(3, {1, 0, 1})), DomainError);
}

TEST_CASE("quadrature agrees with Monte Carlo at n = 3") {
  const auto s4 = spec(3, {1, 1, 1, 1});
  const auto q4 = sym_integral_4(s4);
  const auto m4 = mc_sym_integral(s4, 400000, 5);
  CHECK(std::abs(q4.value - m4.mean) < 3 * m4.std_error);
  const auto s3 = spec(3, {1, 1, 1});
  const auto q3 = sym_integral_3(s3);
  const auto m3 = mc_sym_integral(s3, 400000, 6);
  CHECK(std::abs(q3.value - m3.mean) < 3 * m3.std_error);
  CHECK(q3.error_estimate < 1e-5 * q3.value);
}

TEST_CASE("three-factor integral is symmetric in its exponents") {
  const double base = sym_integral_3(spec(4, {1, 2, 1})).value;
  CHECK(sym_integral_3(spec(4, {2, 1, 1})).value == doctest::Approx(base).epsilon(1e-6));
  CHECK(sym_integral_3(spec(4, {1, 1, 2})).value == doctest::Approx(base).epsilon(1e-6));
}

TEST_CASE("delta scaling") {
  // u -> delta u gives I(delta) = delta^(2 - 2 l c) I(1), l = total exponent.
  const double a = sym_integral_3(spec(5, {1, 1, 1}, 1.0, 1.0)).value;
  const double b = sym_integral_3(spec(5, {1, 1, 1}, 1.0, 2.0)).value;
  CHECK(b == doctest::Approx(a * std::pow(2.0, 2.0 - 6.0)).epsilon(1e-6));
}

TEST_CASE("integrals decay in n") {
  double p4 = INFINITY, p3 = INFINITY;
  for (int n : {6, 10, 14}) {
    const double v4 = sym_integral_4(spec(n, {1, 1, 1, 1})).value;
    const double v3 = sym_integral_3(spec(n, {1, 1, 1})).value;
    CHECK(v4 < p4);
    CHECK(v3 < p3);
    p4 = v4;
    p3 = v3;
  }
}

TEST_CASE("envelope fit") {
  std::vector<int> ns = {10, 14, 18, 22};
  std::vector<double> v;
  for (int n : ns) v.push_back(3.0 * sym_envelope(n) * std::pow(0.9, n));
  auto fit = fit_envelope(ns, v);
  CHECK(fit.monotone);
  CHECK(fit.under_envelope);
  v.back() = v.front();
  fit = fit_envelope(ns, v);
  CHECK_FALSE(fit.monotone);
  CHECK_FALSE(fit.under_envelope);
}

TEST_CASE("minor bound") {
  // Hand-computed minors of (2 0 1; 0 2 1): 4, 2, -2; q = 2 gives M = 4 / 2^2.
  const AdmissibleMatrix d(2, 3, {2, 0, 1, 0, 2, 1}, 2);
  const auto b = iest_bound(d, 5, 1.0, 1.0);
  CHECK(b.minor_max == Rational(1));
  CHECK(b.bound == doctest::Approx(1.0));
  const auto b2 = iest_bound(d, 5, 1.0, 2.0);
  CHECK(b2.bound == doctest::Approx(std::pow(2.0, 2 - 6.0)));
  const auto id = iest_bound(AdmissibleMatrix::identity(3), 7, 0.75, 1.0);
  CHECK(id.minor_max == Rational(1));
  CHECK(id.bound == doctest::Approx(std::pow(0.5, -3.0)));
  // One signed entry per column: the exact value sits below the bound.
  for (const auto& x : enumerate_X(Composition{{2, 1}})) {
    const auto ib = iest_bound(x, 9, 1.0, 1.0);
    CHECK(ib.minor_max == Rational(1));
    CHECK(signed_class_integral(x, 1.0, 1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(signed_class_integral(x, 1.0, 1.0) <= ib.bound);
  }
}

TEST_CASE("symmetrization inequality holds in Monte Carlo") {
  SUBCASE("zero shift") {
    const auto r = mc_symmetrization_check(spec(3, {1, 1, 1}), {{0, 0, 0}}, {1}, 200000, 1);
    CHECK(r.pass);
    CHECK(r.lhs_estimate > 0);
  }
  SUBCASE("unit shifts, n = 2") {
    Rng rng(8);
    const double t = 2 * std::numbers::pi * rng.uniform();
    const auto r = mc_symmetrization_check(spec(2, {1, 1, 1, 1}), {{std::cos(t), std::sin(t)}, {0.0, 1.0}}, {1, -1},
                                           200000, 2);
    CHECK(r.pass);
  }
  SUBCASE("random signs, n = 3") {
    const auto r = mc_symmetrization_check(spec(3, {2, 1, 1}), {{0.3, -0.2, 0.9}, {1.0, 0.0, 0.0}}, {-1, 1}, 200000, 3);
    CHECK(r.pass);
  }
  CHECK_THROWS_AS(mc_symmetrization_check(spec(4, {1, 1, 1}), {{0, 0, 0, 0}}, {1}, 100, 1), DomainError);
  CHECK_THROWS_AS(mc_symmetrization_check(spec(3, {1, 1, 1}), {}, {}, 100, 1), DomainError);
}

}
