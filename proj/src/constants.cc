#include "rumour/constants.h"

#include <cmath>
#include <numbers>

#include "rumour/errors.h"

namespace rumour {

double FixedPointResidual(double x) { return x * std::exp(2 * (1 - x)) - 1; }

double SolveFixedPoint(double tolerance) {
  if (!(tolerance > 0)) throw DomainError("SolveFixedPoint: tolerance must be positive");
  constexpr int kMaxIterations = 200;

  // The residual is -1 at 0, positive at 1/2 and increasing in between.
  double lo = 0.0;
  double hi = 0.5;
  double x = 0.25;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double f = FixedPointResidual(x);
    if (std::abs(f) <= tolerance) return x;
    if (f < 0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = std::exp(2 * (1 - x)) * (1 - 2 * x);
    double next = x - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  throw InvariantError("SolveFixedPoint: no convergence within the iteration cap");
}

ModelConstants DeriveConstants(double x_inf) {
  if (!(x_inf > 0 && x_inf < 0.5)) {
    throw DomainError("DeriveConstants: x_inf must lie in (0, 1/2)");
  }
  ModelConstants c{};
  c.x_inf = x_inf;
  c.v_inf = 1 - x_inf;
  c.sigma2 = x_inf * (1 - x_inf) / (1 - 2 * x_inf);
  c.varrho = 2 + std::log(x_inf * (1 - x_inf));
  c.kappa = 2 - 1 / c.v_inf;
  c.alpha = std::sqrt(1 / (2 * std::numbers::pi * (2 * c.v_inf - 1)));
  c.beta = 1 / (std::numbers::e * c.v_inf * (1 - c.v_inf));
  return c;
}

const ModelConstants& DefaultConstants() {
  static const ModelConstants constants = DeriveConstants(SolveFixedPoint());
  return constants;
}

}  // namespace rumour
