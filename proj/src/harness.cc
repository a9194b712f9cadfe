#include "rumour/harness.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <tuple>

#include "rumour/errors.h"
#include "rumour/log_math.h"

namespace rumour {
namespace {

void RequireIncreasing(const std::vector<std::int64_t>& n_grid) {
  if (n_grid.empty()) throw DomainError("n grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw DomainError("n grid values must be >= 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw DomainError("n grid must be increasing");
  }
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::string Backend(const FinalSizeDistribution& dist) { return std::string(ToString(dist.backend())); }

}  // namespace

ScaleChoice ScaleChoice::LogQuarter() { return {ScaleKind::kLogQuarter, 0.25}; }
ScaleChoice ScaleChoice::LogLogHalf() { return {ScaleKind::kLogLogHalf, 0.5}; }
ScaleChoice ScaleChoice::LogPower(double exponent) {
  if (!(exponent > 0)) throw DomainError("scale exponent must be positive");
  return {ScaleKind::kCustom, exponent};
}

std::optional<ScaleChoice> ScaleChoice::Parse(std::string_view name) {
  if (name == "log_quarter") return LogQuarter();
  if (name == "loglog_half") return LogLogHalf();
  constexpr std::string_view kPrefix = "log_pow:";
  if (name.starts_with(kPrefix)) {
    const std::string tail(name.substr(kPrefix.size()));
    try {
      std::size_t used = 0;
      const double p = std::stod(tail, &used);
      if (used == tail.size() && p > 0) return LogPower(p);
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

std::string ScaleChoice::name() const {
  switch (kind_) {
    case ScaleKind::kLogQuarter: return "log_quarter";
    case ScaleKind::kLogLogHalf: return "loglog_half";
    case ScaleKind::kCustom: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "log_pow:%g", exponent_);
      return buf;
    }
  }
  return "unknown";
}

double ScaleChoice::operator()(double n) const {
  if (!(n > 1)) throw DomainError("scale: n must exceed 1");
  const double log_n = std::log(n);
  if (kind_ == ScaleKind::kLogLogHalf) {
    if (!(log_n > 1)) throw DomainError("loglog_half scale needs n > e");
    return std::sqrt(std::log(log_n));
  }
  return std::pow(log_n, exponent_);
}

bool ScaleValidityProbe(const ScaleChoice& scale, const std::vector<std::int64_t>& n_grid) {
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    const double a = static_cast<double>(n_grid[i - 1]);
    const double b = static_cast<double>(n_grid[i]);
    if (!(scale(b) > scale(a))) return false;
    if (!(scale(b) * scale(b) / std::log(b) < scale(a) * scale(a) / std::log(a))) return false;
  }
  return true;
}

void DeviationReport::SortRows() {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.n, a.quantity, a.param) < std::tie(b.n, b.quantity, b.param);
  });
}

std::vector<ReportRow> DeviationReport::Select(std::string_view quantity) const {
  std::vector<ReportRow> out;
  for (const auto& row : rows) {
    if (row.quantity == quantity) out.push_back(row);
  }
  return out;
}

double KsDistanceToNormal(const FinalSizeDistribution& dist) {
  const double dn = static_cast<double>(dist.n());
  const double centre = dn * dist.constants().x_inf;
  const double sd = std::sqrt(dist.constants().sigma2);
  std::int64_t lo = 0;
  std::int64_t hi = dist.support_size() - 1;
  if (dist.lazy()) {
    const double w = 50 * std::sqrt(dn);
    lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(centre - w)));
    hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(std::floor(centre + w)));
  }
  long double cdf = 0;
  double worst = 0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double g = NormalCdf((static_cast<double>(k) - centre) / std::sqrt(dn) / sd);
    worst = std::max(worst, std::abs(static_cast<double>(cdf) - g));
    cdf += std::exp(static_cast<long double>(dist.LogPmf(k)));
    worst = std::max(worst, std::abs(static_cast<double>(cdf) - g));
  }
  return worst;
}

Harness::Harness(ExactEngine& engine, int threads)
    : engine_(engine), rates_(engine.constants()), threads_(std::max(1, threads)) {}

template <typename RowFn>
DeviationReport Harness::Collect(std::string kind, const std::vector<std::int64_t>& n_grid,
                                 RowFn&& fn) {
  RequireIncreasing(n_grid);
  std::int64_t exact_needed = 0;
  for (auto n : n_grid) {
    const DistBackend b = engine_.AutoBackend(n);
    if (b == DistBackend::kRational || b == DistBackend::kFloatFormula) {
      exact_needed = std::max(exact_needed, n);
    }
  }
  if (exact_needed > 0) engine_.Table(static_cast<int>(exact_needed));

  std::vector<std::vector<ReportRow>> per_n(n_grid.size());
  auto work = [&](std::size_t worker, std::size_t workers) {
    for (std::size_t i = worker; i < n_grid.size(); i += workers) {
      const FinalSizeDistribution dist = engine_.Distribution(n_grid[i]);
      per_n[i] = fn(n_grid[i], dist);
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads_), n_grid.size());
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  DeviationReport report{std::move(kind), {}};
  for (auto& rows : per_n) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }
  report.SortRows();
  return report;
}

DeviationReport Harness::MdpTable(const std::vector<double>& z_list, const ScaleChoice& scale,
                                  const std::vector<std::int64_t>& n_grid) {
  for (double z : z_list) {
    if (!(z > 0)) throw DomainError("mdp: z values must be positive");
  }
  const double sigma2 = engine_.constants().sigma2;
  return Collect("mdp", n_grid, [&](std::int64_t n, const FinalSizeDistribution& dist) {
    std::vector<ReportRow> rows;
    const double b = scale(static_cast<double>(n));
    for (double z : z_list) {
      const WindowedLogProb tail = TailLogProbWithBound(dist, z, b, TailSide::kBoth);
      rows.push_back({"tail", n, b, z, tail.log_prob / (b * b), -z * z / (2 * sigma2),
                      Backend(dist), tail.log_truncation_bound});
    }
    return rows;
  });
}

DeviationReport Harness::LdpTable(const std::vector<double>& x_list,
                                  const std::vector<std::int64_t>& n_grid) {
  const double x_inf = engine_.constants().x_inf;
  for (double x : x_list) {
    if (!(x > 0 && x < 1) || x == x_inf) throw DomainError("ldp: x must lie in (0,1), x != x_inf");
  }
  return Collect("ldp", n_grid, [&](std::int64_t n, const FinalSizeDistribution& dist) {
    std::vector<ReportRow> rows;
    const double dn = static_cast<double>(n);
    for (double x : x_list) {
      const double hint = std::abs(x - x_inf) * dn + 60 * std::sqrt(dn);
      const WindowedLogProb p =
          x < x_inf ? LogProbRange(dist, 0, static_cast<std::int64_t>(std::floor(x * dn)), hint)
                    : LogProbRange(dist, static_cast<std::int64_t>(std::ceil(x * dn)), n, hint);
      const double empirical = -p.log_prob / dn;
      const double target = rates_.h(x);
      rows.push_back({"tail", n, 0.0, x, empirical, target, Backend(dist), empirical - target});
    }
    return rows;
  });
}

DeviationReport Harness::CltCheck(const std::vector<std::int64_t>& n_grid) {
  return Collect("clt", n_grid, [&](std::int64_t n, const FinalSizeDistribution& dist) {
    return std::vector<ReportRow>{
        {"ks", n, 0.0, 0.0, KsDistanceToNormal(dist), 0.0, Backend(dist), 0.0}};
  });
}

DeviationReport Harness::EndpointProbe(const std::vector<std::int64_t>& n_grid,
                                       const ScaleChoice& scale) {
  return Collect("endpoint", n_grid, [&](std::int64_t n, const FinalSizeDistribution& dist) {
    const double dn = static_cast<double>(n);
    const double b = scale(dn);
    // P(V_n = 1) = d_1 n^{-2} with d_1 = 1 needs no table.
    const double endpoint = dist.lazy() ? 1 / (dn * dn) : dist.Pmf(n - 1);
    return std::vector<ReportRow>{{"endpoint", n, b, 0.0, endpoint, 1 / (dn * dn),
                                   Backend(dist), -2 * std::log(dn) / (b * b)}};
  });
}

DeviationReport Harness::LocalMdpCheck(const std::vector<double>& z_list, const ScaleChoice& scale,
                                       const std::vector<std::int64_t>& n_grid) {
  const double sigma2 = engine_.constants().sigma2;
  return Collect("local", n_grid, [&](std::int64_t n, const FinalSizeDistribution& dist) {
    std::vector<ReportRow> rows;
    const double dn = static_cast<double>(n);
    const double b = scale(dn);
    for (double z : z_list) {
      const std::int64_t k = rates_.LatticePoint(n, z, b);
      const double value =
          (dist.LogPmf(k) + 0.5 * std::log(dn) + z * z * b * b / (2 * sigma2)) / (b * b);
      rows.push_back({"point", n, b, z, value, 0.0, Backend(dist), static_cast<double>(k)});
    }
    return rows;
  });
}

DeviationReport Harness::TightnessCheck(const std::vector<double>& l_list,
                                        const ScaleChoice& scale,
                                        const std::vector<std::int64_t>& n_grid, double delta) {
  for (double l : l_list) {
    if (!(l > 0)) throw DomainError("tightness: L values must be positive");
  }
  if (!(delta > 0 && delta < 1)) throw DomainError("tightness: delta must lie in (0, 1)");
  const double sigma2 = engine_.constants().sigma2;
  const double x_inf = engine_.constants().x_inf;
  const double radius = rates_.QuadraticBoundRadius();
  return Collect("tightness", n_grid, [&](std::int64_t n, const FinalSizeDistribution& dist) {
    std::vector<ReportRow> rows;
    const double dn = static_cast<double>(n);
    const double b = scale(dn);
    const double centre = dn * x_inf;
    const double outer = radius * dn;
    for (double l : l_list) {
      // L b sqrt(n) < |k - n x_inf| <= r n
      const double inner = l * b * std::sqrt(dn);
      const double hint = outer + 1;
      double log_p = kNegInf;
      if (inner < outer) {
        auto left_hi = static_cast<std::int64_t>(std::ceil(centre - inner)) - 1;
        auto left_lo = static_cast<std::int64_t>(std::ceil(centre - outer));
        auto right_lo = static_cast<std::int64_t>(std::floor(centre + inner)) + 1;
        auto right_hi = static_cast<std::int64_t>(std::floor(centre + outer));
        log_p = LogAdd(LogProbRange(dist, left_lo, left_hi, hint).log_prob,
                       LogProbRange(dist, right_lo, right_hi, hint).log_prob);
      }
      rows.push_back({"moderate_window", n, b, l, log_p / (b * b), -l * l / (8 * sigma2),
                      Backend(dist), radius});
    }
    // V_n <= delta n  <=>  X_n >= n - floor(delta n)
    const auto layer_lo = n - static_cast<std::int64_t>(std::floor(delta * dn));
    const double layer = std::exp(LogProbRange(dist, layer_lo, n).log_prob);
    rows.push_back({"endpoint_layer", n, b, delta, dn * layer, kEndpointLayerConstant,
                    Backend(dist), layer});
    return rows;
  });
}

}  // namespace rumour
