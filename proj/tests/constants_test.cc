#include <doctest.h>

#include <cmath>

#include "rumour/constants.h"
#include "rumour/errors.h"

using namespace rumour;

namespace {

// 40-digit reference values.
constexpr double kXInf = 0.2031878699799799538;
constexpr double kSigma2 = 0.27273575285157374;
constexpr double kVarrho = 0.17923939055103613;
constexpr double kKappa = 0.74499902508402473;
constexpr double kAlpha = 0.51779069924199185;
constexpr double kBeta = 2.2722274581016789;

double Bisect() {
  double lo = 0.01, hi = 0.49;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::exp(2 * (1 - mid)) < 1 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("fixed point") {
  const double x = SolveFixedPoint(1e-12);
  CHECK(std::abs(x - kXInf) < 1e-12);
  CHECK(std::abs(SolveFixedPoint() - kXInf) < 1e-15);
  CHECK(std::abs(SolveFixedPoint() - Bisect()) < 1e-15);
  CHECK(std::abs(FixedPointResidual(SolveFixedPoint())) <= 1e-14);
  CHECK_THROWS_AS(SolveFixedPoint(0), DomainError);
  CHECK_THROWS_AS(SolveFixedPoint(-1), DomainError);
}

TEST_CASE("derived constants") {
  const ModelConstants& c = DefaultConstants();
  CHECK(c.x_inf + c.v_inf == 1.0);
  CHECK(c.sigma2 == doctest::Approx(kSigma2).epsilon(1e-14));
  CHECK(c.varrho == doctest::Approx(kVarrho).epsilon(1e-13));
  CHECK(c.kappa == doctest::Approx(kKappa).epsilon(1e-14));
  CHECK(c.alpha == doctest::Approx(kAlpha).epsilon(1e-14));
  CHECK(c.beta == doctest::Approx(kBeta).epsilon(1e-14));
  // log x_inf + 2 v_inf = 0 is the fixed-point equation in log form.
  CHECK(std::abs(std::log(c.x_inf) + 2 * c.v_inf) < 1e-14);
  // The printed four-digit values.
  CHECK(std::abs(c.sigma2 - 0.272727) < 1e-5);
  CHECK(std::abs(c.varrho - 0.1792) < 5e-5);
}

TEST_CASE("derive rejects points outside (0, 1/2)") {
  CHECK_THROWS_AS(DeriveConstants(0.0), DomainError);
  CHECK_THROWS_AS(DeriveConstants(0.5), DomainError);
  CHECK_THROWS_AS(DeriveConstants(0.7), DomainError);
  CHECK_NOTHROW(DeriveConstants(0.3));
}
