#ifndef RUMOUR_REPORT_IO_H_
#define RUMOUR_REPORT_IO_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rumour/harness.h"

namespace rumour {

// CSV schema for deviation reports. One header row,
//
//   quantity,n,b_n,param,empirical_rate,target_rate,backend,aux
//
// then one row per ReportRow. n is a decimal integer; the floating columns
// use %.17g, with infinities written as inf / -inf and NaN as nan. quantity
// and backend never contain commas or quotes.
inline constexpr std::string_view kReportCsvHeader =
    "quantity,n,b_n,param,empirical_rate,target_rate,backend,aux";

enum class OutputFormat { kHuman, kCsv, kJson };

// %.17g (csv/json) or %.6g (human), non-finite values spelled out.
std::string FormatDouble(double value, int digits = 17);
// Inverse of FormatDouble for any digit count. Throws DomainError.
double ParseDouble(std::string_view text);

// Splits on commas; no quoting.
std::vector<std::string> SplitCsvLine(std::string_view line);

void WriteReportCsv(std::ostream& out, const DeviationReport& report);
// Reads what WriteReportCsv wrote; kind is not part of the CSV and is left
// empty. Throws DomainError on a malformed header or row.
DeviationReport ParseReportCsv(std::istream& in);

void WriteReportJson(std::ostream& out, const DeviationReport& report);
void WriteReportHuman(std::ostream& out, const DeviationReport& report);
void WriteReport(std::ostream& out, const DeviationReport& report, OutputFormat format);

}  // namespace rumour

#endif  // RUMOUR_REPORT_IO_H_
