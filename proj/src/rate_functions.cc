#include "rumour/rate_functions.h"

#include <cmath>
#include <string>

#include "rumour/errors.h"
#include "rumour/log_math.h"

namespace rumour {

double RateFunctions::h(double x) const {
  if (!(x >= 0 && x < 1)) {
    throw DomainError("h: argument " + std::to_string(x) + " outside [0, 1)");
  }
  const double entropy = x > 0 ? x * std::log(x) : 0.0;
  return entropy + (1 - x) * (c_.varrho - std::log1p(-x));
}

double RateFunctions::HFromOffset(double delta) const {
  const double x = c_.x_inf + delta;
  if (!(x >= 0 && x < 1)) throw DomainError("HFromOffset: point outside [0, 1)");
  if (x == 0) return c_.varrho;
  // With log x_inf + 2 v_inf = 0 the constant and linear parts cancel exactly:
  // h = -2 delta + x log(1 + delta/x_inf) - v log(1 - delta/v_inf).
  const double v = c_.v_inf - delta;
  return -2 * delta + x * std::log1p(delta / c_.x_inf) - v * std::log1p(-delta / c_.v_inf);
}

double RateFunctions::H(double x) const {
  if (!(x >= 0 && x < 1)) return kPosInf;
  return h(x);
}

double RateFunctions::J(double x) const { return x * x / (2 * c_.sigma2); }

double RateFunctions::HPrime(double x) const {
  if (!(x > 0 && x < 1)) throw DomainError("HPrime: argument outside (0, 1)");
  return std::log(x) - c_.varrho + std::log1p(-x) + 2;
}

double RateFunctions::PointLogProbPrediction(std::int64_t n, double z, double b_n) const {
  if (n < 2) throw DomainError("PointLogProbPrediction: n must be >= 2");
  if (!(b_n > 0)) throw DomainError("PointLogProbPrediction: b_n must be positive");
  return -0.5 * std::log(static_cast<double>(n)) - z * z * b_n * b_n / (2 * c_.sigma2);
}

std::int64_t RateFunctions::LatticePoint(std::int64_t n, double z, double b_n) const {
  const double dn = static_cast<double>(n);
  const double k = std::floor(dn * c_.x_inf + z * b_n * std::sqrt(dn));
  if (!(k >= 0 && k <= dn - 1)) {
    throw DomainError("lattice point k_n(z) out of support for n=" + std::to_string(n) +
                      ", z=" + std::to_string(z));
  }
  return static_cast<std::int64_t>(k);
}

double RateFunctions::QuadraticBoundRadius(double step) const {
  return QuadraticBoundRadius(step, 1 / (4 * c_.sigma2));
}

double RateFunctions::QuadraticBoundRadius(double step, double coefficient) const {
  if (!(step > 0)) throw DomainError("QuadraticBoundRadius: step must be positive");
  const double limit = std::min(c_.x_inf, c_.v_inf);
  double radius = 0;
  for (int m = 1;; ++m) {
    const double r = m * step;
    if (r >= limit) break;
    const double bound = coefficient * r * r;
    if (h(c_.x_inf + r) < bound || h(c_.x_inf - r) < bound) break;
    radius = r;
  }
  return radius;
}

DerivativeEstimate RateFunctions::DerivativesAtMinimum(double step, bool richardson) const {
  if (!(step > 0 && step < 1e-2)) {
    throw DomainError("DerivativesAtMinimum: step must lie in (0, 1e-2)");
  }
  const double x = c_.x_inf;
  auto central = [&](double s) {
    const double hp = h(x + s);
    const double hm = h(x - s);
    const double h0 = h(x);
    return DerivativeEstimate{(hp - hm) / (2 * s), (hp - 2 * h0 + hm) / (s * s)};
  };
  DerivativeEstimate coarse = central(step);
  if (!richardson) return coarse;
  const DerivativeEstimate fine = central(step / 2);
  return {(4 * fine.h1 - coarse.h1) / 3, (4 * fine.h2 - coarse.h2) / 3};
}

}  // namespace rumour
