#ifndef RUMOUR_EXACT_DIST_H_
#define RUMOUR_EXACT_DIST_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "rumour/automata.h"
#include "rumour/constants.h"

namespace rumour {

enum class DistBackend { kRational, kFloatFormula, kAsymptoticD, kDpOracle };

// Stifling-rate convention. kFormula uses j(n - i), under which the jump
// chain reproduces the closed-form distribution; kPaperLiteral uses j(n+1-i).
enum class RateConvention { kFormula, kPaperLiteral };

enum class TailSide { kLeft, kRight, kBoth };

std::string_view ToString(DistBackend backend);
std::string_view ToString(RateConvention convention);
std::optional<DistBackend> ParseDistBackend(std::string_view name);
std::optional<RateConvention> ParseRateConvention(std::string_view name);

// Resource limits per backend. Overridable through the environment:
// RUMOUR_MAX_EXACT_J, RUMOUR_MAX_RATIONAL_N, RUMOUR_MAX_FLOAT_N, RUMOUR_MAX_DP_N.
struct ResourceCaps {
  int exact_j = kDefaultExactCap;
  std::int64_t rational_n = 300;
  std::int64_t float_n = 5000;
  std::int64_t dp_n = 2000;

  static ResourceCaps FromEnv();
};

inline constexpr double kFloatNormalizationTolerance = 1e-10;

// Final ignorant count X_n. Materialized backends hold log P(X_n = k) for
// every k in the support; the asymptotic backend evaluates each k on demand
// (a pure function of k, so concurrent reads are safe).
class FinalSizeDistribution {
 public:
  std::int64_t n() const { return n_; }
  DistBackend backend() const { return backend_; }
  RateConvention convention() const { return convention_; }
  const ModelConstants& constants() const { return constants_; }
  bool lazy() const { return backend_ == DistBackend::kAsymptoticD; }

  // k ranges over [0, support_size()). n for the formula convention; the
  // paper-literal chain can also end at k = n.
  std::int64_t support_size() const { return support_size_; }

  double LogPmf(std::int64_t k) const;
  double Pmf(std::int64_t k) const;
  // Materialized backends only.
  const std::vector<double>& log_pmf() const;
  // Rational backend only; nullptr otherwise.
  const std::vector<mpq_class>* exact_pmf() const {
    return exact_.empty() ? nullptr : &exact_;
  }

 private:
  friend FinalSizeDistribution MakeDistribution(std::int64_t, DistBackend, const AutomataTable&,
                                                const ResourceCaps&);
  friend FinalSizeDistribution DpDistribution(std::int64_t, RateConvention, const ResourceCaps&,
                                              const ModelConstants&);

  FinalSizeDistribution(std::int64_t n, DistBackend backend, RateConvention convention,
                        const ModelConstants& constants, std::int64_t support_size)
      : n_(n), backend_(backend), convention_(convention), constants_(constants),
        support_size_(support_size) {}

  std::int64_t n_;
  DistBackend backend_;
  RateConvention convention_;
  ModelConstants constants_;
  std::int64_t support_size_;
  std::vector<double> log_pmf_;
  std::vector<mpq_class> exact_;
};

// log P(V_n = j) = lgamma(n) - lgamma(n-j+1) + log d_j - 2j log n, for
// 1 <= j <= n. With an asymptotic table the same quantity is evaluated in a
// form that avoids cancelling O(n log n) terms.
double LogPmfV(std::int64_t n, std::int64_t j, const AutomataTable& table);

// Exact P(V_n = j) as a fraction. The table must cover j.
mpq_class ExactPmfV(std::int64_t n, std::int64_t j, const AutomataTable& table);

// Closed-form distribution using the given table. kRational and
// kFloatFormula need an exact table covering n; kAsymptoticD only reads the
// constants, and uses exact d_j from a small built-in table when n - k <= 256.
// Normalization is checked for materialized backends.
FinalSizeDistribution MakeDistribution(std::int64_t n, DistBackend backend,
                                       const AutomataTable& table,
                                       const ResourceCaps& caps = {});

// Absorption distribution of the embedded jump chain from (n, 1), by forward
// propagation of probability mass over states (i, j) in long double.
FinalSizeDistribution DpDistribution(std::int64_t n,
                                     RateConvention convention = RateConvention::kFormula,
                                     const ResourceCaps& caps = {},
                                     const ModelConstants& constants = DefaultConstants());

// P(X_n = k) from the same propagation, stopping once level k is absorbed.
// No resource cap; cost is O((n - k) n).
double DpPointMass(std::int64_t n, std::int64_t k,
                   RateConvention convention = RateConvention::kFormula);

struct WindowedLogProb {
  double log_prob;
  // log of a bound on mass left out by the summation window (-inf if none).
  double log_truncation_bound;
};

// log P(k_lo <= X_n <= k_hi). For lazy distributions the sum runs over the
// core window |k - n x_inf| <= max(window_hint, 50 sqrt(n)) plus the exact
// endpoint term P(X_n = n-1) = n^{-2}.
WindowedLogProb LogProbRange(const FinalSizeDistribution& dist, std::int64_t k_lo,
                             std::int64_t k_hi, double window_hint = 0);

// log P(|X_n - n x_inf| >= z b_n sqrt(n)) on the requested side(s);
// -inf when no lattice point qualifies.
double TailLogProb(const FinalSizeDistribution& dist, double z, double b_n, TailSide side);
WindowedLogProb TailLogProbWithBound(const FinalSizeDistribution& dist, double z,
                                     double b_n, TailSide side);

struct Moments {
  double mean;
  double variance;
};
Moments ComputeMoments(const FinalSizeDistribution& dist);

double TotalVariation(const FinalSizeDistribution& a, const FinalSizeDistribution& b);

// Owns an exact automata table that grows on demand, and picks backends by n:
// rational up to caps.rational_n, float formula up to caps.float_n,
// asymptotic beyond.
class ExactEngine {
 public:
  explicit ExactEngine(const ModelConstants& constants = DefaultConstants(),
                       ResourceCaps caps = ResourceCaps::FromEnv());

  const ModelConstants& constants() const { return constants_; }
  const ResourceCaps& caps() const { return caps_; }

  // Exact table covering at least j_max. Thread-safe.
  std::shared_ptr<const AutomataTable> Table(int j_max);
  const AutomataTable& AsymptoticTable() const { return asymptotic_; }

  DistBackend AutoBackend(std::int64_t n) const;
  FinalSizeDistribution Distribution(std::int64_t n, DistBackend backend);
  FinalSizeDistribution Distribution(std::int64_t n) { return Distribution(n, AutoBackend(n)); }

 private:
  ModelConstants constants_;
  ResourceCaps caps_;
  AutomataTable asymptotic_;
  std::mutex mutex_;
  std::shared_ptr<const AutomataTable> table_;
};

}  // namespace rumour

#endif  // RUMOUR_EXACT_DIST_H_
