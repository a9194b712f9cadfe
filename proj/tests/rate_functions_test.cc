#include <doctest.h>

#include <cmath>

#include "rumour/errors.h"
#include "rumour/rate_functions.h"

using namespace rumour;

TEST_CASE("h vanishes only at the fixed point") {
  const RateFunctions r;
  const ModelConstants& c = r.constants();
  CHECK(std::abs(r.h(c.x_inf)) < 1e-12);
  for (double x : {0.05, 0.4, 0.9}) CHECK(r.h(x) > 0);
  CHECK(r.h(0) == doctest::Approx(c.varrho).epsilon(1e-15));
  CHECK_THROWS_AS(r.h(1.0), DomainError);
  CHECK_THROWS_AS(r.h(-0.1), DomainError);
}

TEST_CASE("offset form agrees with the direct form") {
  const RateFunctions r;
  const double x_inf = r.constants().x_inf;
  for (double d : {-0.2, -0.1, -1e-3, 1e-3, 0.05, 0.3, 0.7}) {
    CHECK(r.HFromOffset(d) == doctest::Approx(r.h(x_inf + d)).epsilon(1e-10));
  }
  // Near the minimum the offset form keeps relative accuracy; h ~ d^2/(2 sigma^2).
  const double d = 1e-7;
  CHECK(r.HFromOffset(d) == doctest::Approx(r.J(d)).epsilon(1e-5));
  CHECK(r.HFromOffset(-d) == doctest::Approx(r.J(d)).epsilon(1e-5));
}

TEST_CASE("H and J") {
  const RateFunctions r;
  CHECK(r.H(1.0) == INFINITY);
  CHECK(r.H(1.5) == INFINITY);
  CHECK(r.H(-0.1) == INFINITY);
  CHECK(r.H(1 - 1e-6) < 1e-4);
  CHECK(r.H(0.3) == r.h(0.3));
  CHECK(r.J(1.0) == doctest::Approx(1 / (2 * r.constants().sigma2)));
  CHECK(r.J(-2.0) == r.J(2.0));
}

TEST_CASE("derivatives at the minimum") {
  const RateFunctions r;
  const double s2 = r.constants().sigma2;
  CHECK(std::abs(r.HPrime(r.constants().x_inf)) < 1e-14);
  const DerivativeEstimate plain = r.DerivativesAtMinimum(1e-4);
  CHECK(std::abs(plain.h1) < 1e-6);
  CHECK(std::abs(plain.h2 * s2 - 1) < 1e-4);
  const DerivativeEstimate rich = r.DerivativesAtMinimum(1e-3, true);
  CHECK(std::abs(rich.h2 * s2 - 1) < 1e-6);
  CHECK_THROWS_AS(r.DerivativesAtMinimum(0), DomainError);
  CHECK_THROWS_AS(r.DerivativesAtMinimum(0.1), DomainError);
}

TEST_CASE("quadratic lower bound radius") {
  const RateFunctions r;
  const double radius = r.QuadraticBoundRadius();
  CHECK(radius > 0);
  CHECK(radius < r.constants().x_inf);
  // With coefficient 1/(4 sigma^2) the bound holds across the whole left side.
  CHECK(radius == doctest::Approx(0.2031).epsilon(1e-9));
  const double c = 1 / (4 * r.constants().sigma2);
  for (double u = r.constants().x_inf - radius; u <= r.constants().x_inf + radius; u += 1e-3) {
    CHECK(r.h(u) >= c * (u - r.constants().x_inf) * (u - r.constants().x_inf));
  }
  // A coefficient above the curvature 1/(2 sigma^2) fails at once.
  CHECK(r.QuadraticBoundRadius(1e-4, 1.0 / r.constants().sigma2) < 1e-3);
}

TEST_CASE("lattice point and point prediction") {
  const RateFunctions r;
  const double x_inf = r.constants().x_inf;
  CHECK(r.LatticePoint(10000, 0, 1.5) == static_cast<std::int64_t>(std::floor(10000 * x_inf)));
  CHECK(r.LatticePoint(10000, 1, 2.0) == static_cast<std::int64_t>(std::floor(10000 * x_inf + 200)));
  CHECK_THROWS_AS(r.LatticePoint(100, 10, 2.0), DomainError);
  CHECK(r.PointLogProbPrediction(100, 1, 2) ==
        doctest::Approx(-0.5 * std::log(100.0) - 4 / (2 * r.constants().sigma2)));
}
