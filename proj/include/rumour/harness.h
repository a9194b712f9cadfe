#ifndef RUMOUR_HARNESS_H_
#define RUMOUR_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rumour/exact_dist.h"
#include "rumour/rate_functions.h"

namespace rumour {

enum class ScaleKind { kLogQuarter, kLogLogHalf, kCustom };

// Moderate-deviation scale b_n. The built-in choices grow without bound while
// b_n^2 / log n -> 0. kCustom is (log n)^p for a user exponent p; p = 0.6
// violates the endpoint condition and is used to show why it is needed.
class ScaleChoice {
 public:
  static ScaleChoice LogQuarter();
  static ScaleChoice LogLogHalf();
  static ScaleChoice LogPower(double exponent);
  // "log_quarter", "loglog_half" or "log_pow:<p>".
  static std::optional<ScaleChoice> Parse(std::string_view name);

  ScaleKind kind() const { return kind_; }
  std::string name() const;
  double operator()(double n) const;

 private:
  ScaleChoice(ScaleKind kind, double exponent) : kind_(kind), exponent_(exponent) {}
  ScaleKind kind_;
  double exponent_;
};

// True when b_n increases and b_n^2 / log n decreases along the grid.
bool ScaleValidityProbe(const ScaleChoice& scale, const std::vector<std::int64_t>& n_grid);

// One row of a convergence table. The meaning of param and aux depends on
// the report; see report_io.h for the column schema.
struct ReportRow {
  std::string quantity;
  std::int64_t n = 0;
  double b_n = 0;
  double param = 0;
  double empirical_rate = 0;
  double target_rate = 0;
  std::string backend;
  double aux = 0;

  bool operator==(const ReportRow&) const = default;
};

struct DeviationReport {
  std::string kind;
  std::vector<ReportRow> rows;

  // Rows ordered by (n, quantity, param).
  void SortRows();
  std::vector<ReportRow> Select(std::string_view quantity) const;
  bool operator==(const DeviationReport&) const = default;
};

inline constexpr double kDefaultEndpointDelta = 0.1;
// n P(V_n <= delta n) is compared against this constant.
inline constexpr double kEndpointLayerConstant = 1.0;

// Kolmogorov-Smirnov distance between the law of (X_n - n x_inf)/sqrt(n) and
// N(0, sigma^2), evaluated on both sides of every jump.
double KsDistanceToNormal(const FinalSizeDistribution& dist);

class Harness {
 public:
  // Grid points are evaluated on up to `threads` workers; output order does
  // not depend on it.
  explicit Harness(ExactEngine& engine, int threads = 1);

  // empirical = log P(|Z_n| >= z) / b_n^2, target = -z^2/(2 sigma^2),
  // aux = log truncation bound of the summation window.
  DeviationReport MdpTable(const std::vector<double>& z_list, const ScaleChoice& scale,
                           const std::vector<std::int64_t>& n_grid);
  // empirical = -(1/n) log P(X_n <= x n) below x_inf (>= above),
  // target = h(x), aux = empirical - target.
  DeviationReport LdpTable(const std::vector<double>& x_list,
                           const std::vector<std::int64_t>& n_grid);
  // empirical = KS distance, target = 0.
  DeviationReport CltCheck(const std::vector<std::int64_t>& n_grid);
  // empirical = P(X_n = n-1), target = n^{-2}, aux = -2 log n / b_n^2.
  DeviationReport EndpointProbe(const std::vector<std::int64_t>& n_grid, const ScaleChoice& scale);
  // empirical = (log P(X_n = k_n(z)) + log(n)/2 + z^2 b_n^2/(2 sigma^2)) / b_n^2,
  // target = 0, aux = k_n(z).
  DeviationReport LocalMdpCheck(const std::vector<double>& z_list, const ScaleChoice& scale,
                                const std::vector<std::int64_t>& n_grid);
  // Two quantities per n:
  //   moderate_window: empirical = log P(L < |Z_n| <= r sqrt(n)/b_n) / b_n^2,
  //                    target = -L^2/(8 sigma^2), aux = r.
  //   endpoint_layer:  empirical = n P(V_n <= delta n),
  //                    target = kEndpointLayerConstant, param = delta,
  //                    aux = P(V_n <= delta n).
  DeviationReport TightnessCheck(const std::vector<double>& l_list, const ScaleChoice& scale,
                                 const std::vector<std::int64_t>& n_grid,
                                 double delta = kDefaultEndpointDelta);

 private:
  template <typename RowFn>
  DeviationReport Collect(std::string kind, const std::vector<std::int64_t>& n_grid, RowFn&& fn);

  ExactEngine& engine_;
  RateFunctions rates_;
  int threads_;
};

}  // namespace rumour

#endif  // RUMOUR_HARNESS_H_
