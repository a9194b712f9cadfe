#ifndef RUMOUR_LOG_MATH_H_
#define RUMOUR_LOG_MATH_H_

#include <cmath>
#include <limits>
#include <span>

#include <gmpxx.h>

namespace rumour {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow.
inline double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double LogSumExp(std::span<const double> values);

// Streaming log-sum-exp. Terms are rescaled against the largest value seen
// so far and summed in long double.
class LogSumAccumulator {
 public:
  void Add(double log_term);
  double Result() const;
  bool empty() const { return max_ == kNegInf; }

 private:
  double max_ = kNegInf;
  long double scaled_sum_ = 0.0L;
};

// Natural log of a positive big integer via mantissa and binary exponent.
double LogOf(const mpz_class& value);
// Same through the leading decimal digits and the decimal length. Used as an
// independent check of LogOf.
double LogOfDecimal(const mpz_class& value);
double LogOf(const mpq_class& value);

// log(x!) Stirling remainder: lgamma(m + 1) - (m log m - m + log(2 pi m) / 2).
double StirlingRemainder(double m);

// log of the standard normal upper tail, stable far into the tail.
double LogNormalUpperTail(double x);

}  // namespace rumour

#endif  // RUMOUR_LOG_MATH_H_
