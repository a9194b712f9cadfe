#include "rumour/report_io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "rumour/errors.h"

namespace rumour {
namespace {

std::int64_t ParseInt(std::string_view text) {
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw DomainError("report csv: bad integer '" + std::string(text) + "'");
  }
  return value;
}

nlohmann::json JsonNumber(double value) {
  if (std::isfinite(value)) return value;
  return FormatDouble(value);
}

}  // namespace

std::string FormatDouble(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

double ParseDouble(std::string_view text) {
  if (text == "inf" || text == "+inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  if (text == "nan") return std::nan("");
  const std::string s(text);
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw DomainError("bad number '" + s + "'");
  }
  return value;
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

void WriteReportCsv(std::ostream& out, const DeviationReport& report) {
  out << kReportCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.quantity << ',' << r.n << ',' << FormatDouble(r.b_n) << ',' << FormatDouble(r.param)
        << ',' << FormatDouble(r.empirical_rate) << ',' << FormatDouble(r.target_rate) << ','
        << r.backend << ',' << FormatDouble(r.aux) << '\n';
  }
}

DeviationReport ParseReportCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("report csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kReportCsvHeader) throw DomainError("report csv: unexpected header '" + line + "'");
  DeviationReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 8) throw DomainError("report csv: expected 8 fields in '" + line + "'");
    report.rows.push_back({f[0], ParseInt(f[1]), ParseDouble(f[2]), ParseDouble(f[3]),
                           ParseDouble(f[4]), ParseDouble(f[5]), f[6], ParseDouble(f[7])});
  }
  return report;
}

void WriteReportJson(std::ostream& out, const DeviationReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"quantity", r.quantity},
                    {"n", r.n},
                    {"b_n", JsonNumber(r.b_n)},
                    {"param", JsonNumber(r.param)},
                    {"empirical_rate", JsonNumber(r.empirical_rate)},
                    {"target_rate", JsonNumber(r.target_rate)},
                    {"backend", r.backend},
                    {"aux", JsonNumber(r.aux)}});
  }
  nlohmann::json doc = {{"kind", report.kind}, {"rows", rows}};
  // nlohmann prints doubles with round-trip precision (17 digits at most).
  out << doc.dump(2) << '\n';
}

void WriteReportHuman(std::ostream& out, const DeviationReport& report) {
  char buf[256];
  out << report.kind << '\n';
  std::snprintf(buf, sizeof buf, "%-16s %12s %10s %8s %14s %14s %-14s %12s\n", "quantity", "n",
                "b_n", "param", "empirical", "target", "backend", "aux");
  out << buf;
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%-16s %12lld %10s %8s %14s %14s %-14s %12s\n",
                  r.quantity.c_str(), static_cast<long long>(r.n),
                  FormatDouble(r.b_n, 6).c_str(), FormatDouble(r.param, 6).c_str(),
                  FormatDouble(r.empirical_rate, 6).c_str(), FormatDouble(r.target_rate, 6).c_str(),
                  r.backend.c_str(), FormatDouble(r.aux, 6).c_str());
    out << buf;
  }
}

void WriteReport(std::ostream& out, const DeviationReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::kHuman: WriteReportHuman(out, report); break;
    case OutputFormat::kCsv: WriteReportCsv(out, report); break;
    case OutputFormat::kJson: WriteReportJson(out, report); break;
  }
}

}  // namespace rumour
