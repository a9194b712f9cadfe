#include "rumour/exact_dist.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "rumour/errors.h"
#include "rumour/log_math.h"
#include "rumour/rate_functions.h"

namespace rumour {
namespace {

constexpr double kCoreWindowSigmas = 50;  // in units of sqrt(n)

std::int64_t EnvOr(const char* name, std::int64_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(value >= 1) || value != std::floor(value)) {
    throw DomainError(std::string("invalid value for ") + name + ": " + raw);
  }
  return static_cast<std::int64_t>(value);
}

// Below this many informed ignorants the lazy backend uses exact d_j.
constexpr int kSmallExactJ = 256;

// log P(X_n = k) with the leading-order d_j. Writing every factorial through
// Stirling's formula, the O(n log n) and O(n) pieces collapse into -n h(k/n):
//
//   log P = -n h(k/n) + (1/2) log(j / (k n)) + log(alpha kappa)
//           + w(n) - w(k),    j = n - k,  w = Stirling remainder.
double AsymptoticLogPmf(std::int64_t n, std::int64_t k, const ModelConstants& c) {
  const double dn = static_cast<double>(n);
  const std::int64_t j = n - k;
  if (j <= kSmallExactJ) {
    // Endpoint layer: exact d_j and
    // log((n-1)!/(n-j)!) - (j-1) log n = sum_{i<j} log1p(-i/n).
    static const AutomataTable small = AutomataTable::ComputeExact(kSmallExactJ);
    double falling = 0;
    for (std::int64_t i = 1; i < j; ++i) falling += std::log1p(-static_cast<double>(i) / dn);
    return falling + small.log_value(static_cast<int>(j)) - static_cast<double>(j + 1) * std::log(dn);
  }
  if (k == 0) {
    return std::lgamma(dn) + LogDAsymptotic(dn, c) - 2 * dn * std::log(dn);
  }
  const RateFunctions rates(c);
  const long double centre = static_cast<long double>(n) * c.x_inf;
  const double offset = static_cast<double>((static_cast<long double>(k) - centre) / n);
  const double dk = static_cast<double>(k);
  return -dn * rates.HFromOffset(offset) +
         0.5 * std::log(static_cast<double>(j) / (dk * dn)) + std::log(c.alpha * c.kappa) +
         StirlingRemainder(dn) - StirlingRemainder(dk);
}

void CheckNormalization(const std::vector<double>& log_pmf, DistBackend backend) {
  const double total = std::exp(LogSumExp(log_pmf));
  if (!(std::abs(total - 1) <= kFloatNormalizationTolerance)) {
    throw InvariantError(std::string(ToString(backend)) + " distribution sums to " +
                         std::to_string(total));
  }
}

}  // namespace

std::string_view ToString(DistBackend backend) {
  switch (backend) {
    case DistBackend::kRational: return "rational";
    case DistBackend::kFloatFormula: return "float_formula";
    case DistBackend::kAsymptoticD: return "asymptotic_d";
    case DistBackend::kDpOracle: return "dp_oracle";
  }
  return "unknown";
}

std::string_view ToString(RateConvention convention) {
  return convention == RateConvention::kFormula ? "formula" : "paper-literal";
}

std::optional<DistBackend> ParseDistBackend(std::string_view name) {
  for (auto b : {DistBackend::kRational, DistBackend::kFloatFormula, DistBackend::kAsymptoticD,
                 DistBackend::kDpOracle}) {
    if (ToString(b) == name) return b;
  }
  return std::nullopt;
}

std::optional<RateConvention> ParseRateConvention(std::string_view name) {
  if (name == "formula") return RateConvention::kFormula;
  if (name == "paper-literal" || name == "paper_literal") return RateConvention::kPaperLiteral;
  return std::nullopt;
}

ResourceCaps ResourceCaps::FromEnv() {
  ResourceCaps caps;
  caps.exact_j = static_cast<int>(EnvOr("RUMOUR_MAX_EXACT_J", caps.exact_j));
  caps.rational_n = EnvOr("RUMOUR_MAX_RATIONAL_N", caps.rational_n);
  caps.float_n = EnvOr("RUMOUR_MAX_FLOAT_N", caps.float_n);
  caps.dp_n = EnvOr("RUMOUR_MAX_DP_N", caps.dp_n);
  return caps;
}

double FinalSizeDistribution::LogPmf(std::int64_t k) const {
  if (k < 0 || k >= support_size_) return kNegInf;
  if (lazy()) return AsymptoticLogPmf(n_, k, constants_);
  return log_pmf_[static_cast<std::size_t>(k)];
}

double FinalSizeDistribution::Pmf(std::int64_t k) const {
  if (!exact_.empty() && k >= 0 && k < support_size_) return exact_[static_cast<std::size_t>(k)].get_d();
  return std::exp(LogPmf(k));
}

const std::vector<double>& FinalSizeDistribution::log_pmf() const {
  if (lazy()) throw DomainError("log_pmf: asymptotic distribution is evaluated per point");
  return log_pmf_;
}

double LogPmfV(std::int64_t n, std::int64_t j, const AutomataTable& table) {
  if (n < 1 || j < 1 || j > n) {
    throw DomainError("LogPmfV: need 1 <= j <= n (n=" + std::to_string(n) +
                      ", j=" + std::to_string(j) + ")");
  }
  if (table.backend() == DjBackend::kAsymptotic) {
    return AsymptoticLogPmf(n, n - j, table.constants());
  }
  const double dn = static_cast<double>(n);
  const double dj = static_cast<double>(j);
  return std::lgamma(dn) - std::lgamma(dn - dj + 1) + table.LogD(j, DjBackend::kExact) -
         2 * dj * std::log(dn);
}

mpq_class ExactPmfV(std::int64_t n, std::int64_t j, const AutomataTable& table) {
  if (n < 1 || j < 1 || j > n) throw DomainError("ExactPmfV: need 1 <= j <= n");
  mpz_class falling = 1;  // (n-1)!/(n-j)!
  for (std::int64_t m = n - j + 1; m <= n - 1; ++m) falling *= static_cast<unsigned long>(m);
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(n),
                static_cast<unsigned long>(2 * j));
  mpq_class p(falling * table.value(static_cast<int>(j)), power);
  p.canonicalize();
  return p;
}

FinalSizeDistribution MakeDistribution(std::int64_t n, DistBackend backend,
                                       const AutomataTable& table, const ResourceCaps& caps) {
  if (n < 1) throw DomainError("distribution: n must be >= 1");
  const ModelConstants& c = table.constants();
  FinalSizeDistribution dist(n, backend, RateConvention::kFormula, c, n);
  switch (backend) {
    case DistBackend::kAsymptoticD:
      return dist;
    case DistBackend::kDpOracle:
      return DpDistribution(n, RateConvention::kFormula, caps, c);
    case DistBackend::kRational: {
      if (n > caps.rational_n) {
        throw ResourceError("rational", "n=" + std::to_string(n) + " exceeds cap " +
                                            std::to_string(caps.rational_n));
      }
      if (table.backend() != DjBackend::kExact || !table.Covers(n)) {
        throw DomainError("rational backend needs an exact table covering d_" +
                          std::to_string(n));
      }
      const auto un = static_cast<unsigned long>(n);
      dist.exact_.resize(un);
      dist.log_pmf_.resize(un);
      mpz_class falling = 1;  // (n-1)!/k!, built from k = n-1 downwards
      mpz_class power;
      mpq_class total = 0;
      for (std::int64_t k = n - 1; k >= 0; --k) {
        if (k < n - 1) falling *= static_cast<unsigned long>(k + 1);
        const auto j = static_cast<unsigned long>(n - k);
        mpz_ui_pow_ui(power.get_mpz_t(), un, 2 * j);
        mpq_class p(falling * table.value(static_cast<int>(j)), power);
        p.canonicalize();
        total += p;
        dist.log_pmf_[static_cast<std::size_t>(k)] = LogOf(p);
        dist.exact_[static_cast<std::size_t>(k)] = std::move(p);
      }
      if (total != 1) throw InvariantError("rational distribution does not sum to 1");
      return dist;
    }
    case DistBackend::kFloatFormula: {
      if (n > caps.float_n) {
        throw ResourceError("float_formula", "n=" + std::to_string(n) + " exceeds cap " +
                                                 std::to_string(caps.float_n));
      }
      if (table.backend() != DjBackend::kExact || !table.Covers(n)) {
        throw DomainError("float_formula backend needs an exact table covering d_" +
                          std::to_string(n));
      }
      dist.log_pmf_.resize(static_cast<std::size_t>(n));
      for (std::int64_t k = 0; k < n; ++k) {
        dist.log_pmf_[static_cast<std::size_t>(k)] = LogPmfV(n, n - k, table);
      }
      CheckNormalization(dist.log_pmf_, backend);
      return dist;
    }
  }
  throw DomainError("distribution: unknown backend");
}

namespace {

template <typename Visitor>
void PropagateJumpChain(std::int64_t n, RateConvention convention, std::int64_t stop_level,
                        Visitor&& on_absorbed) {
  const auto size = static_cast<std::size_t>(n) + 3;
  std::vector<long double> level(size, 0.0L);
  std::vector<long double> below(size, 0.0L);
  level[1] = 1.0L;
  const long double denom = convention == RateConvention::kFormula
                                ? static_cast<long double>(n)
                                : static_cast<long double>(n + 1);
  for (std::int64_t i = n; i >= stop_level; --i) {
    // States (i, j) with 1 <= j <= n + 1 - i. Stifling keeps i and lowers j,
    // so mass is pushed down in j before it is read.
    const auto top = static_cast<std::size_t>(n + 1 - i);
    const long double convert = static_cast<long double>(i) / denom;
    const long double stifle = 1.0L - convert;
    std::fill(below.begin(), below.begin() + static_cast<std::ptrdiff_t>(top) + 2, 0.0L);
    for (std::size_t j = top; j >= 1; --j) {
      const long double mass = level[j];
      if (mass == 0.0L) continue;
      below[j + 1] += mass * convert;
      level[j - 1] += mass * stifle;
      level[j] = 0.0L;
    }
    on_absorbed(i, level[0]);
    level[0] = 0.0L;
    std::swap(level, below);
  }
}

}  // namespace

FinalSizeDistribution DpDistribution(std::int64_t n, RateConvention convention,
                                     const ResourceCaps& caps, const ModelConstants& constants) {
  if (n < 1) throw DomainError("dp: n must be >= 1");
  if (n > caps.dp_n) {
    throw ResourceError("dp_oracle",
                        "n=" + std::to_string(n) + " exceeds cap " + std::to_string(caps.dp_n));
  }
  const std::int64_t support = convention == RateConvention::kFormula ? n : n + 1;
  FinalSizeDistribution dist(n, DistBackend::kDpOracle, convention, constants, support);
  std::vector<long double> absorbed(static_cast<std::size_t>(n) + 1, 0.0L);
  PropagateJumpChain(n, convention, 0, [&](std::int64_t i, long double mass) {
    absorbed[static_cast<std::size_t>(i)] = mass;
  });
  if (convention == RateConvention::kFormula && absorbed[static_cast<std::size_t>(n)] != 0.0L) {
    throw InvariantError("dp: formula convention left mass at k = n");
  }
  dist.log_pmf_.resize(static_cast<std::size_t>(support));
  for (std::int64_t k = 0; k < support; ++k) {
    const long double p = absorbed[static_cast<std::size_t>(k)];
    dist.log_pmf_[static_cast<std::size_t>(k)] =
        p > 0 ? static_cast<double>(std::log(p)) : kNegInf;
  }
  CheckNormalization(dist.log_pmf_, DistBackend::kDpOracle);
  return dist;
}

double DpPointMass(std::int64_t n, std::int64_t k, RateConvention convention) {
  if (n < 1 || k < 0 || k > n) throw DomainError("DpPointMass: need 0 <= k <= n");
  long double result = 0.0L;
  PropagateJumpChain(n, convention, k, [&](std::int64_t i, long double mass) {
    if (i == k) result = mass;
  });
  return static_cast<double>(result);
}

WindowedLogProb LogProbRange(const FinalSizeDistribution& dist, std::int64_t k_lo,
                             std::int64_t k_hi, double window_hint) {
  k_lo = std::max<std::int64_t>(k_lo, 0);
  k_hi = std::min<std::int64_t>(k_hi, dist.support_size() - 1);
  if (k_lo > k_hi) return {kNegInf, kNegInf};

  LogSumAccumulator acc;
  if (!dist.lazy()) {
    const auto& lp = dist.log_pmf();
    for (std::int64_t k = k_lo; k <= k_hi; ++k) acc.Add(lp[static_cast<std::size_t>(k)]);
    return {acc.Result(), kNegInf};
  }

  const std::int64_t n = dist.n();
  const ModelConstants& c = dist.constants();
  const double dn = static_cast<double>(n);
  const double centre = dn * c.x_inf;
  const double half_width = std::max(window_hint, kCoreWindowSigmas * std::sqrt(dn));
  const auto core_lo = std::max<std::int64_t>(
      0, static_cast<std::int64_t>(std::ceil(centre - half_width)));
  const auto core_hi = std::min<std::int64_t>(
      n - 1, static_cast<std::int64_t>(std::floor(centre + half_width)));

  const std::int64_t lo = std::max(k_lo, core_lo);
  const std::int64_t hi = std::min(k_hi, core_hi);
  for (std::int64_t k = lo; k <= hi; ++k) acc.Add(dist.LogPmf(k));

  // P(X_n = n-1) = n^{-2} exactly.
  const std::int64_t endpoint = n - 1;
  const bool endpoint_outside = endpoint > core_hi && endpoint >= k_lo && endpoint <= k_hi;
  if (endpoint_outside) acc.Add(-2 * std::log(dn));

  double bound = kNegInf;
  if (k_lo < core_lo || k_hi > core_hi) {
    // Gaussian comparison p_k <= n^{-1/2} exp(-(k - n x_inf)^2 / (4 sigma^2 n)),
    // summed over both sides beyond the window.
    const double s = std::sqrt(2 * c.sigma2 * dn);
    const double gauss = std::log(2.0) - 0.5 * std::log(dn) +
                         std::log(s * std::sqrt(2 * std::numbers::pi)) +
                         LogNormalUpperTail((half_width - 1) / s);
    bound = gauss;
    if (k_hi > core_hi && k_hi >= n - 2) {
      // Endpoint layer past V_n = 1: P(V_n = 2) ~ 12/n^3, geometrically
      // dominated beyond; doubled as a bound.
      bound = LogAdd(bound, std::log(24.0) - 3 * std::log(dn));
    }
  }
  return {acc.Result(), bound};
}

WindowedLogProb TailLogProbWithBound(const FinalSizeDistribution& dist, double z, double b_n,
                                     TailSide side) {
  if (!(z > 0)) throw DomainError("TailLogProb: z must be positive");
  if (!(b_n > 0)) throw DomainError("TailLogProb: b_n must be positive");
  const double dn = static_cast<double>(dist.n());
  const double centre = dn * dist.constants().x_inf;
  const double threshold = z * b_n * std::sqrt(dn);
  const double hint = 4 * threshold;

  WindowedLogProb result{kNegInf, kNegInf};
  auto merge = [&](WindowedLogProb part) {
    result.log_prob = LogAdd(result.log_prob, part.log_prob);
    result.log_truncation_bound = LogAdd(result.log_truncation_bound, part.log_truncation_bound);
  };
  if (side != TailSide::kRight) {
    const double edge = std::floor(centre - threshold);
    if (edge >= 0) merge(LogProbRange(dist, 0, static_cast<std::int64_t>(edge), hint));
  }
  if (side != TailSide::kLeft) {
    const double edge = std::ceil(centre + threshold);
    if (edge <= static_cast<double>(dist.support_size() - 1)) {
      merge(LogProbRange(dist, static_cast<std::int64_t>(edge), dist.support_size() - 1, hint));
    }
  }
  return result;
}

double TailLogProb(const FinalSizeDistribution& dist, double z, double b_n, TailSide side) {
  return TailLogProbWithBound(dist, z, b_n, side).log_prob;
}

Moments ComputeMoments(const FinalSizeDistribution& dist) {
  std::int64_t lo = 0;
  std::int64_t hi = dist.support_size() - 1;
  if (dist.lazy()) {
    const double dn = static_cast<double>(dist.n());
    const double centre = dn * dist.constants().x_inf;
    const double w = kCoreWindowSigmas * std::sqrt(dn);
    lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(centre - w)));
    hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(std::floor(centre + w)));
  }
  long double mass = 0, first = 0, second = 0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const long double p = std::exp(static_cast<long double>(dist.LogPmf(k)));
    mass += p;
    first += p * k;
    second += p * static_cast<long double>(k) * k;
  }
  const long double mean = first / mass;
  const long double var = second / mass - mean * mean;
  return {static_cast<double>(mean), static_cast<double>(std::max(var, 0.0L))};
}

double TotalVariation(const FinalSizeDistribution& a, const FinalSizeDistribution& b) {
  if (a.lazy() || b.lazy()) throw DomainError("TotalVariation: materialized distributions only");
  const std::int64_t size = std::max(a.support_size(), b.support_size());
  long double sum = 0;
  for (std::int64_t k = 0; k < size; ++k) sum += std::abs(a.Pmf(k) - b.Pmf(k));
  return static_cast<double>(sum / 2);
}

ExactEngine::ExactEngine(const ModelConstants& constants, ResourceCaps caps)
    : constants_(constants), caps_(caps), asymptotic_(AutomataTable::Asymptotic(constants)) {}

std::shared_ptr<const AutomataTable> ExactEngine::Table(int j_max) {
  std::lock_guard lock(mutex_);
  if (table_ && table_->Covers(j_max)) return table_;
  if (!table_) {
    table_ = std::make_shared<const AutomataTable>(
        AutomataTable::ComputeExact(j_max, constants_, caps_.exact_j));
    return table_;
  }
  auto grown = std::make_shared<AutomataTable>(*table_);
  grown->ExtendTo(j_max);
  table_ = std::move(grown);
  return table_;
}

DistBackend ExactEngine::AutoBackend(std::int64_t n) const {
  if (n <= caps_.rational_n) return DistBackend::kRational;
  if (n <= caps_.float_n && n <= caps_.exact_j) return DistBackend::kFloatFormula;
  return DistBackend::kAsymptoticD;
}

FinalSizeDistribution ExactEngine::Distribution(std::int64_t n, DistBackend backend) {
  switch (backend) {
    case DistBackend::kRational:
    case DistBackend::kFloatFormula: {
      if (n > caps_.exact_j) {
        throw ResourceError(std::string(ToString(backend)),
                            "n=" + std::to_string(n) + " needs d_j beyond the exact cap " +
                                std::to_string(caps_.exact_j));
      }
      if ((backend == DistBackend::kRational && n > caps_.rational_n) ||
          (backend == DistBackend::kFloatFormula && n > caps_.float_n)) {
        return MakeDistribution(n, backend, asymptotic_, caps_);  // throws the cap error
      }
      auto table = Table(static_cast<int>(std::max<std::int64_t>(n, 1)));
      return MakeDistribution(n, backend, *table, caps_);
    }
    case DistBackend::kAsymptoticD:
      return MakeDistribution(n, backend, asymptotic_, caps_);
    case DistBackend::kDpOracle:
      return DpDistribution(n, RateConvention::kFormula, caps_, constants_);
  }
  throw DomainError("unknown backend");
}

}  // namespace rumour
