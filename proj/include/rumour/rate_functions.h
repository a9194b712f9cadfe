#ifndef RUMOUR_RATE_FUNCTIONS_H_
#define RUMOUR_RATE_FUNCTIONS_H_

#include <cstdint>

#include "rumour/constants.h"

namespace rumour {

struct DerivativeEstimate {
  double h1;  // h'(x_inf)
  double h2;  // h''(x_inf)
};

// Rate functions of the final ignorant proportion.
//
//   h(x) = x log x + (1 - x)(varrho - log(1 - x))   on [0, 1)
//   H(x) = h(x) on [0, 1), +inf elsewhere (including x = 1)
//   J(x) = x^2 / (2 sigma^2)                         moderate-deviation rate
//
// Pure functions of the constants; thread-safe.
class RateFunctions {
 public:
  explicit RateFunctions(const ModelConstants& constants = DefaultConstants())
      : c_(constants) {}

  const ModelConstants& constants() const { return c_; }

  // Throws DomainError outside [0, 1). h(0) = varrho by continuity.
  double h(double x) const;
  // h(x_inf + delta) computed from the offset. Uses log1p so that
  // n * h stays accurate for tiny offsets at very large n.
  double HFromOffset(double delta) const;
  double H(double x) const;
  double J(double x) const;
  // log x - varrho + log(1 - x) + 2
  double HPrime(double x) const;

  // -(1/2) log n - z^2 b_n^2 / (2 sigma^2)
  double PointLogProbPrediction(std::int64_t n, double z, double b_n) const;
  // floor(n x_inf + z b_n sqrt(n)); DomainError if outside {0..n-1}.
  std::int64_t LatticePoint(std::int64_t n, double z, double b_n) const;

  // Largest r on a grid of the given step, below min(x_inf, 1 - x_inf), such
  // that h(u) >= coefficient * (u - x_inf)^2 at every grid point with
  // |u - x_inf| <= r. The default coefficient is 1/(4 sigma^2).
  double QuadraticBoundRadius(double step = 1e-4) const;
  double QuadraticBoundRadius(double step, double coefficient) const;

  // Central differences of h at x_inf; optional Richardson extrapolation.
  DerivativeEstimate DerivativesAtMinimum(double step = 1e-4, bool richardson = false) const;

 private:
  ModelConstants c_;
};

}  // namespace rumour

#endif  // RUMOUR_RATE_FUNCTIONS_H_
