#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "rumour/errors.h"
#include "rumour/report_io.h"

using namespace rumour;

namespace {

DeviationReport Sample() {
  DeviationReport report{"mdp", {}};
  report.rows.push_back({"tail", 10000, 1.7420803978302745, 1, -2.3306212301187, -1.8332763298257649,
                         "asymptotic_d", -24.453});
  report.rows.push_back({"tail", 10000000000, 0.1 + 0.2, -0.0, 1e-300, 5e-324, "rational",
                         -std::numeric_limits<double>::infinity()});
  report.rows.push_back({"endpoint_layer", 50, 0, 0.1, std::numeric_limits<double>::infinity(),
                         1, "float_formula", 2.0 / 3});
  return report;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(FormatDouble(0.1) == "0.10000000000000001");
  CHECK(FormatDouble(0.1, 6) == "0.1");
  CHECK(FormatDouble(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(FormatDouble(std::nan("")) == "nan");
  CHECK(ParseDouble("inf") == std::numeric_limits<double>::infinity());
  CHECK(std::isnan(ParseDouble("nan")));
  CHECK(ParseDouble("-1.5e-3") == -1.5e-3);
  CHECK_THROWS_AS(ParseDouble("1.5x"), DomainError);
  CHECK_THROWS_AS(ParseDouble(""), DomainError);
  for (double v : {1.0 / 3, 5e-324, 1.7976931348623157e308, -0.2031878699799799}) {
    CHECK(ParseDouble(FormatDouble(v)) == v);
  }
}

TEST_CASE("csv round trip is lossless") {
  const DeviationReport report = Sample();
  std::stringstream csv;
  WriteReportCsv(csv, report);
  const std::string text = csv.str();
  CHECK(text.rfind(std::string(kReportCsvHeader) + "\n", 0) == 0);
  DeviationReport back = ParseReportCsv(csv);
  back.kind = report.kind;
  CHECK(back == report);
  CHECK(std::signbit(back.rows[1].param));
}

TEST_CASE("csv parser rejects malformed input") {
  std::istringstream empty("");
  CHECK_THROWS_AS(ParseReportCsv(empty), DomainError);
  std::istringstream header("quantity,n\n");
  CHECK_THROWS_AS(ParseReportCsv(header), DomainError);
  std::istringstream short_row(std::string(kReportCsvHeader) + "\ntail,1,2\n");
  CHECK_THROWS_AS(ParseReportCsv(short_row), DomainError);
  std::istringstream bad_n(std::string(kReportCsvHeader) + "\ntail,1.5,1,1,1,1,x,1\n");
  CHECK_THROWS_AS(ParseReportCsv(bad_n), DomainError);
  std::istringstream crlf(std::string(kReportCsvHeader) + "\r\ntail,3,1,1,1,1,x,1\r\n");
  CHECK(ParseReportCsv(crlf).rows.size() == 1);
}

TEST_CASE("json output") {
  std::stringstream out;
  WriteReportJson(out, Sample());
  const auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["kind"] == "mdp");
  REQUIRE(doc["rows"].size() == 3);
  CHECK(doc["rows"][0]["n"] == 10000);
  CHECK(doc["rows"][0]["empirical_rate"].get<double>() == -2.3306212301187);
  CHECK(doc["rows"][1]["aux"] == "-inf");
  CHECK(doc["rows"][2]["empirical_rate"] == "inf");
}

TEST_CASE("human output uses six digits") {
  std::stringstream out;
  WriteReportHuman(out, Sample());
  const std::string text = out.str();
  CHECK(text.find("-2.33062") != std::string::npos);
  CHECK(text.find("-2.330621") == std::string::npos);
  CHECK(text.find("asymptotic_d") != std::string::npos);
}

TEST_CASE("split") {
  CHECK(SplitCsvLine("a,,b") == std::vector<std::string>{"a", "", "b"});
  CHECK(SplitCsvLine("x\r") == std::vector<std::string>{"x"});
}
