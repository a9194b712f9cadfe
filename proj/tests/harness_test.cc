#include <doctest.h>

#include <cmath>

#include "rumour/errors.h"
#include "rumour/harness.h"

using namespace rumour;

namespace {

ExactEngine& Engine() {
  static ExactEngine engine;
  return engine;
}

const std::vector<std::int64_t> kBigGrid = {10000, 1000000, 100000000, 10000000000};

}  // namespace

TEST_CASE("scales") {
  const auto q = ScaleChoice::LogQuarter();
  CHECK(q(1e4) == doctest::Approx(std::pow(std::log(1e4), 0.25)));
  CHECK(ScaleChoice::LogLogHalf()(1e4) == doctest::Approx(std::sqrt(std::log(std::log(1e4)))));
  CHECK(ScaleChoice::LogPower(0.6)(1e4) == doctest::Approx(std::pow(std::log(1e4), 0.6)));
  CHECK_THROWS_AS(q(1.0), DomainError);
  CHECK_THROWS_AS(ScaleChoice::LogLogHalf()(2.0), DomainError);
  CHECK_THROWS_AS(ScaleChoice::LogPower(0), DomainError);

  for (const char* name : {"log_quarter", "loglog_half", "log_pow:0.6"}) {
    const auto parsed = ScaleChoice::Parse(name);
    REQUIRE(parsed.has_value());
    CHECK(parsed->name() == name);
  }
  CHECK_FALSE(ScaleChoice::Parse("log_pow:").has_value());
  CHECK_FALSE(ScaleChoice::Parse("log_pow:-1").has_value());
  CHECK_FALSE(ScaleChoice::Parse("linear").has_value());
}

TEST_CASE("scale validity probe") {
  CHECK(ScaleValidityProbe(ScaleChoice::LogQuarter(), kBigGrid));
  CHECK(ScaleValidityProbe(ScaleChoice::LogLogHalf(), kBigGrid));
  // b_n^2 / log n = (log n)^{0.2} grows.
  CHECK_FALSE(ScaleValidityProbe(ScaleChoice::LogPower(0.6), kBigGrid));
}

TEST_CASE("mdp targets depend only on z and sigma^2") {
  Harness harness(Engine());
  const double s2 = Engine().constants().sigma2;
  const auto a = harness.MdpTable({1, 2}, ScaleChoice::LogQuarter(), kBigGrid);
  const auto b = harness.MdpTable({1, 2}, ScaleChoice::LogLogHalf(), kBigGrid);
  REQUIRE(a.rows.size() == 8);
  REQUIRE(b.rows.size() == 8);
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    CHECK(a.rows[r].target_rate == -a.rows[r].param * a.rows[r].param / (2 * s2));
    CHECK(a.rows[r].target_rate == b.rows[r].target_rate);
    CHECK(a.rows[r].backend == "asymptotic_d");
    CHECK(a.rows[r].empirical_rate < 0);
    // The window leaves out far less than it keeps.
    CHECK(a.rows[r].aux < a.rows[r].empirical_rate * a.rows[r].b_n * a.rows[r].b_n - 5);
  }
  // Sorted by (n, quantity, param).
  CHECK(a.rows[0].n == 10000);
  CHECK(a.rows[0].param == 1);
  CHECK(a.rows[1].param == 2);
  CHECK(a.rows[7].n == 10000000000);
}

TEST_CASE("reports are identical at any thread count") {
  Harness one(Engine(), 1);
  Harness four(Engine(), 4);
  const std::vector<std::int64_t> grid = {100, 400, 1600, 10000};
  CHECK(one.CltCheck(grid) == four.CltCheck(grid));
  CHECK(one.LdpTable({0.15, 0.3}, grid) == four.LdpTable({0.15, 0.3}, grid));
  CHECK(one.LocalMdpCheck({-1, 0, 1}, ScaleChoice::LogQuarter(), kBigGrid) ==
        four.LocalMdpCheck({-1, 0, 1}, ScaleChoice::LogQuarter(), kBigGrid));
}

TEST_CASE("grid validation") {
  Harness harness(Engine());
  CHECK_THROWS_AS(harness.CltCheck({}), DomainError);
  CHECK_THROWS_AS(harness.CltCheck({400, 100}), DomainError);
  CHECK_THROWS_AS(harness.CltCheck({1, 100}), DomainError);
  CHECK_THROWS_AS(harness.MdpTable({0}, ScaleChoice::LogQuarter(), {100}), DomainError);
  CHECK_THROWS_AS(harness.LdpTable({1.2}, {100}), DomainError);
  CHECK_THROWS_AS(harness.TightnessCheck({2}, ScaleChoice::LogQuarter(), {100}, 0), DomainError);
}

TEST_CASE("ldp rows") {
  Harness harness(Engine());
  const auto report = harness.LdpTable({0.15}, {500, 1000, 2000});
  REQUIRE(report.rows.size() == 3);
  for (const auto& row : report.rows) {
    CHECK(row.aux == row.empirical_rate - row.target_rate);
    CHECK(row.empirical_rate > 0);
  }
  CHECK(report.rows[2].aux < report.rows[0].aux);
}

TEST_CASE("endpoint probe") {
  Harness harness(Engine());
  const auto report = harness.EndpointProbe({100, 1000}, ScaleChoice::LogQuarter());
  for (const auto& row : report.rows) {
    CHECK(row.empirical_rate == doctest::Approx(row.target_rate).epsilon(1e-12));
    CHECK(row.aux == doctest::Approx(-2 * std::log(static_cast<double>(row.n)) / (row.b_n * row.b_n)));
  }
}

TEST_CASE("local rows carry the lattice point") {
  Harness harness(Engine());
  const auto report = harness.LocalMdpCheck({0}, ScaleChoice::LogQuarter(), {10000});
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].aux == std::floor(10000 * Engine().constants().x_inf));
}

TEST_CASE("ks distance") {
  const auto d100 = Engine().Distribution(100);
  const auto d400 = Engine().Distribution(400);
  const double ks100 = KsDistanceToNormal(d100);
  CHECK(ks100 > 0);
  CHECK(ks100 < 0.2);
  CHECK(KsDistanceToNormal(d400) < ks100);
}

TEST_CASE("tightness rows are probabilities") {
  Harness harness(Engine());
  const auto report = harness.TightnessCheck({2}, ScaleChoice::LogQuarter(), {500, 2000, 10000});
  CHECK(report.Select("moderate_window").size() == 3);
  const auto layer = report.Select("endpoint_layer");
  REQUIRE(layer.size() == 3);
  for (const auto& row : layer) {
    CHECK(row.aux >= 0);
    CHECK(row.aux <= 1);
    CHECK(row.param == kDefaultEndpointDelta);
    CHECK(row.empirical_rate == doctest::Approx(static_cast<double>(row.n) * row.aux));
  }
  for (const auto& row : report.Select("moderate_window")) CHECK(row.empirical_rate <= 0);
}
