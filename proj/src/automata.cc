#include "rumour/automata.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rumour/errors.h"
#include "rumour/log_math.h"

namespace rumour {
namespace {

// Indices per block in the inner sum. Within a block the coefficients stay a
// few limbs wide, so most of the work is limb-by-bignum multiply-adds.
constexpr int kBlock = 32;

// sum_{i=1}^{j-1} d_i * F_i * j^{2(j-i)} with F_i = (j-1)!/(j-i)!.
//
// For a block [a, b): F_i = F_a * P(a, i) with P(a, i) = prod_{m=j-i+1}^{j-a} m,
// so the block contributes F_a * j^{2(j-b)} * sum_i d_i P(a, i) j^{2(b-i)}.
mpz_class WeightedSum(const std::vector<mpz_class>& d, unsigned long j) {
  const unsigned long j2 = j * j;
  mpz_class acc = 0;
  mpz_class block_sum;
  mpz_class coef;
  mpz_class power;
  mpz_class f_start = 1;
  for (unsigned long a = 1; a < j; a += kBlock) {
    const unsigned long b = std::min<unsigned long>(a + kBlock, j);
    block_sum = 0;
    coef = 1;
    for (unsigned long i = a; i < b; ++i) {
      if (i > a) coef *= j - i + 1;
      block_sum *= j2;
      mpz_addmul(block_sum.get_mpz_t(), d[i].get_mpz_t(), coef.get_mpz_t());
    }
    mpz_ui_pow_ui(power.get_mpz_t(), j, 2 * (b - a));
    acc *= power;
    mpz_addmul(acc.get_mpz_t(), f_start.get_mpz_t(), block_sum.get_mpz_t());
    f_start *= coef;
    if (b < j) f_start *= j - b + 1;
  }
  return acc * j2;
}

}  // namespace

double LogDAsymptotic(double j, const ModelConstants& c) {
  if (!(j >= 1)) throw DomainError("LogDAsymptotic: j must be >= 1");
  return std::log(c.alpha * c.kappa) + j * std::log(c.beta) + (j + 0.5) * std::log(j);
}

AutomataTable AutomataTable::ComputeExact(int j_max, const ModelConstants& constants,
                                          int cap) {
  if (j_max < 1) throw DomainError("ComputeExact: j_max must be >= 1");
  AutomataTable table(DjBackend::kExact, constants, cap);
  table.values_.resize(1);
  table.log_values_.resize(1, 0.0);
  table.ExtendTo(j_max);
  return table;
}

AutomataTable AutomataTable::Asymptotic(const ModelConstants& constants) {
  return AutomataTable(DjBackend::kAsymptotic, constants, 0);
}

void AutomataTable::ExtendTo(int new_j_max) {
  if (backend_ != DjBackend::kExact) {
    throw DomainError("ExtendTo: asymptotic table has no exact values");
  }
  if (new_j_max <= j_max()) return;
  if (new_j_max > cap_) {
    throw ResourceError("exact", "j_max " + std::to_string(new_j_max) +
                                     " exceeds the configured cap " +
                                     std::to_string(cap_));
  }
  values_.reserve(new_j_max + 1);
  log_values_.reserve(new_j_max + 1);
  if (j_max() == 0) {
    values_.emplace_back(1);
    log_values_.push_back(0.0);
  }
  mpz_class factorial;  // (j-1)!, advanced at the top of each step
  mpz_fac_ui(factorial.get_mpz_t(), static_cast<unsigned long>(j_max() - 1));
  mpz_class numerator;
  for (int j = j_max() + 1; j <= new_j_max; ++j) {
    const auto uj = static_cast<unsigned long>(j);
    factorial *= uj - 1;
    mpz_ui_pow_ui(numerator.get_mpz_t(), uj, 2 * uj);
    numerator -= WeightedSum(values_, uj);
    if (!mpz_divisible_p(numerator.get_mpz_t(), factorial.get_mpz_t())) {
      throw InvariantError("automata recursion produced a non-integer d_" +
                           std::to_string(j));
    }
    mpz_class d;
    mpz_divexact(d.get_mpz_t(), numerator.get_mpz_t(), factorial.get_mpz_t());
    if (sgn(d) <= 0) {
      throw InvariantError("automata recursion produced a non-positive d_" +
                           std::to_string(j));
    }
    log_values_.push_back(LogOf(d));
    values_.push_back(std::move(d));
  }
}

const mpz_class& AutomataTable::value(int j) const {
  if (!Covers(j)) throw DomainError("AutomataTable: index " + std::to_string(j) + " not in table");
  return values_[j];
}

double AutomataTable::log_value(int j) const {
  if (!Covers(j)) throw DomainError("AutomataTable: index " + std::to_string(j) + " not in table");
  return log_values_[j];
}

double AutomataTable::LogD(std::int64_t j, DjBackend backend) const {
  if (j < 1) throw DomainError("LogD: j must be >= 1");
  if (backend == DjBackend::kAsymptotic) {
    return LogDAsymptotic(static_cast<double>(j), constants_);
  }
  if (!Covers(j)) {
    throw DomainError("LogD: exact d_" + std::to_string(j) + " beyond table range " +
                      std::to_string(j_max()));
  }
  return log_values_[j];
}

double AutomataTable::LogDHybrid(std::int64_t j) const {
  return Covers(j) ? LogD(j, DjBackend::kExact) : LogD(j, DjBackend::kAsymptotic);
}

double AutomataTable::AsymptoticRatio(int j) const {
  return std::exp(log_value(j) - LogDAsymptotic(j, constants_));
}

double HandoverGap(const AutomataTable& table, int index) {
  return std::expm1(table.LogD(index, DjBackend::kExact) -
                    table.LogD(index, DjBackend::kAsymptotic));
}

}  // namespace rumour
