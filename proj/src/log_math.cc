#include "rumour/log_math.h"

#include <algorithm>
#include <numbers>
#include <string>

#include "rumour/errors.h"

namespace rumour {

double LogSumExp(std::span<const double> values) {
  LogSumAccumulator acc;
  for (double v : values) acc.Add(v);
  return acc.Result();
}

void LogSumAccumulator::Add(double log_term) {
  if (log_term == kNegInf) return;
  if (log_term > max_) {
    scaled_sum_ = scaled_sum_ * std::exp(static_cast<long double>(max_ - log_term));
    max_ = log_term;
  }
  scaled_sum_ += std::exp(static_cast<long double>(log_term - max_));
}

double LogSumAccumulator::Result() const {
  if (max_ == kNegInf) return kNegInf;
  return max_ + static_cast<double>(std::log(scaled_sum_));
}

double LogOf(const mpz_class& value) {
  if (sgn(value) <= 0) throw DomainError("LogOf: argument must be positive");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

double LogOfDecimal(const mpz_class& value) {
  if (sgn(value) <= 0) throw DomainError("LogOfDecimal: argument must be positive");
  const std::string digits = value.get_str(10);
  const std::size_t lead = std::min<std::size_t>(digits.size(), 18);
  const double head = std::stod(digits.substr(0, lead));
  return std::log(head) +
         static_cast<double>(digits.size() - lead) * std::numbers::ln10;
}

double LogOf(const mpq_class& value) {
  return LogOf(value.get_num()) - LogOf(value.get_den());
}

double StirlingRemainder(double m) {
  if (m < 0) throw DomainError("StirlingRemainder: negative argument");
  if (m == 0) return 0.0;
  if (m < 20) {
    return std::lgamma(m + 1) -
           (m * std::log(m) - m + 0.5 * std::log(2 * std::numbers::pi * m));
  }
  const double inv = 1.0 / m;
  const double inv2 = inv * inv;
  // Asymptotic series, truncation error below 1e-15 for m >= 20.
  return inv * (1.0 / 12 - inv2 * (1.0 / 360 - inv2 * (1.0 / 1260 - inv2 / 1680)));
}

double LogNormalUpperTail(double x) {
  // erfc stays normal (no underflow) well past 30.
  if (x < 30) return std::log(0.5 * std::erfc(x / std::numbers::sqrt2));
  // Mills ratio series; the first omitted term is below 1e-10 here.
  const double x2 = x * x;
  const double series = 1 - 1 / x2 + 3 / (x2 * x2) - 15 / (x2 * x2 * x2) + 105 / (x2 * x2 * x2 * x2);
  return -0.5 * x2 - std::log(x) - 0.5 * std::log(2 * std::numbers::pi) +
         std::log(series);
}

}  // namespace rumour
