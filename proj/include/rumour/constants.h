#ifndef RUMOUR_CONSTANTS_H_
#define RUMOUR_CONSTANTS_H_

namespace rumour {

inline constexpr double kDefaultFixedPointTolerance = 1e-14;

// Closed-form constants of the Maki-Thompson final-size problem. Immutable
// once derived; safe to share between threads.
struct ModelConstants {
  double x_inf;   // limiting ignorant proportion, root of x e^{2(1-x)} = 1
  double v_inf;   // 1 - x_inf
  double sigma2;  // CLT variance x(1-x)/(1-2x)
  double varrho;  // LDP constant 2 + log(x(1-x))
  double kappa;   // 2 - 1/v_inf
  double alpha;   // sqrt(1 / (2 pi (2 v_inf - 1)))
  double beta;    // 1 / (e v_inf (1 - v_inf))
};

// Root of x e^{2(1-x)} = 1 in (0, 1/2). Newton steps from the midpoint,
// falling back to bisection whenever a step leaves the current bracket.
// Returns x with |x e^{2(1-x)} - 1| <= tolerance; throws DomainError for a
// non-positive tolerance and InvariantError if the iteration cap is reached.
double SolveFixedPoint(double tolerance = kDefaultFixedPointTolerance);

// Residual of the fixed-point equation, x e^{2(1-x)} - 1.
double FixedPointResidual(double x);

ModelConstants DeriveConstants(double x_inf);

// Constants at the default tolerance, computed on first use.
const ModelConstants& DefaultConstants();

}  // namespace rumour

#endif  // RUMOUR_CONSTANTS_H_
