#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

#include "rumour/errors.h"
#include "rumour/exact_dist.h"
#include "rumour/log_math.h"

using namespace rumour;

namespace {

const AutomataTable& Table() {
  static const AutomataTable table = AutomataTable::ComputeExact(2000);
  return table;
}

}  // namespace

TEST_CASE("n = 2 by hand") {
  const auto dist = MakeDistribution(2, DistBackend::kRational, Table());
  REQUIRE(dist.exact_pmf() != nullptr);
  CHECK((*dist.exact_pmf())[0] == mpq_class(3, 4));
  CHECK((*dist.exact_pmf())[1] == mpq_class(1, 4));
  CHECK(dist.support_size() == 2);
  CHECK(dist.LogPmf(2) == kNegInf);
  CHECK(dist.LogPmf(-1) == kNegInf);
}

TEST_CASE("rational n = 100 reference values") {
  const auto dist = MakeDistribution(100, DistBackend::kRational, Table());
  mpq_class total = 0;
  for (const auto& p : *dist.exact_pmf()) total += p;
  CHECK(total == 1);
  CHECK(dist.Pmf(20) == doctest::Approx(0.076591416223438397).epsilon(1e-14));
  // b = 2, z = 1: k = 0 and k >= 41.
  CHECK(TailLogProb(dist, 1, 2, TailSide::kBoth) ==
        doctest::Approx(-7.0436506938939900).epsilon(1e-13));
}

TEST_CASE("endpoint mass is exactly n^-2") {
  for (std::int64_t n : {2, 10, 100}) {
    const auto dist = MakeDistribution(n, DistBackend::kRational, Table());
    CHECK((*dist.exact_pmf())[static_cast<std::size_t>(n - 1)] * n * n == 1);
  }
  const auto big = AutomataTable::ComputeExact(60);
  CHECK(ExactPmfV(60, 1, big) == mpq_class(1, 3600));
  CHECK(ExactPmfV(3, 2, big) == mpq_class(8, 27));
}

TEST_CASE("float formula matches the rational values") {
  const auto exact = MakeDistribution(150, DistBackend::kRational, Table());
  const auto fl = MakeDistribution(150, DistBackend::kFloatFormula, Table());
  for (std::int64_t k = 0; k < 150; ++k) {
    CHECK(fl.LogPmf(k) == doctest::Approx(exact.LogPmf(k)).epsilon(1e-12));
  }
}

TEST_CASE("formula equals the jump-chain oracle for n = 1..200") {
  const auto table = AutomataTable::ComputeExact(200);
  double worst = 0;
  for (std::int64_t n = 1; n <= 200; ++n) {
    const auto f = MakeDistribution(n, DistBackend::kFloatFormula, table);
    const auto dp = DpDistribution(n);
    REQUIRE(dp.support_size() == n);
    for (std::int64_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(f.Pmf(k) - dp.Pmf(k)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("paper-literal stifling rate changes the law") {
  const auto lit = DpDistribution(2, RateConvention::kPaperLiteral);
  CHECK(lit.support_size() == 3);
  CHECK(lit.Pmf(2) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(lit.Pmf(1) == doctest::Approx(8.0 / 27).epsilon(1e-15));
  CHECK(lit.Pmf(0) == doctest::Approx(10.0 / 27).epsilon(1e-15));
  const auto formula = DpDistribution(2);
  CHECK(TotalVariation(formula, lit) == doctest::Approx(41.0 / 108).epsilon(1e-14));
}

TEST_CASE("point mass propagation matches the full propagation") {
  const auto dp = DpDistribution(300);
  for (std::int64_t k : {0, 30, 60, 61, 150, 299}) {
    CHECK(DpPointMass(300, k) == doctest::Approx(dp.Pmf(k)).epsilon(1e-13));
  }
  CHECK(DpPointMass(300, 300) == 0.0);
  CHECK_THROWS_AS(DpPointMass(300, 301), DomainError);
}

TEST_CASE("asymptotic backend tracks the exact law in the bulk") {
  const auto fl = MakeDistribution(2000, DistBackend::kFloatFormula, Table());
  const auto asym = MakeDistribution(2000, DistBackend::kAsymptoticD, Table());
  CHECK(asym.lazy());
  CHECK_THROWS_AS(asym.log_pmf(), DomainError);
  const double centre = 2000 * DefaultConstants().x_inf;
  for (std::int64_t k = static_cast<std::int64_t>(centre) - 150; k <= centre + 150; ++k) {
    CHECK(std::abs(asym.LogPmf(k) - fl.LogPmf(k)) < 1e-3);
  }
  // The far tail is carried by the endpoint layer, where d_j is exact.
  const auto tail_fl = LogProbRange(fl, 1000, 1999);
  const auto tail_asym = LogProbRange(asym, 1000, 1999);
  CHECK(tail_asym.log_prob == doctest::Approx(tail_fl.log_prob).epsilon(1e-6));
  CHECK(asym.LogPmf(1999) == doctest::Approx(-2 * std::log(2000.0)).epsilon(1e-14));
  CHECK(tail_fl.log_truncation_bound == kNegInf);
  CHECK(tail_asym.log_truncation_bound < tail_asym.log_prob);
}

TEST_CASE("windowed sums") {
  const auto dist = MakeDistribution(100, DistBackend::kRational, Table());
  CHECK(std::abs(LogProbRange(dist, 0, 99).log_prob) < 1e-13);
  CHECK(LogProbRange(dist, 50, 40).log_prob == kNegInf);
  CHECK(std::abs(LogProbRange(dist, -10, 200).log_prob) < 1e-13);
  const double left = TailLogProb(dist, 1, 2, TailSide::kLeft);
  const double right = TailLogProb(dist, 1, 2, TailSide::kRight);
  CHECK(LogAdd(left, right) == doctest::Approx(TailLogProb(dist, 1, 2, TailSide::kBoth)));
  CHECK(TailLogProb(dist, 100, 2, TailSide::kBoth) == kNegInf);
  CHECK_THROWS_AS(TailLogProb(dist, 0, 2, TailSide::kBoth), DomainError);
}

TEST_CASE("moments") {
  const auto dist = MakeDistribution(2000, DistBackend::kFloatFormula, Table());
  const Moments m = ComputeMoments(dist);
  const ModelConstants& c = DefaultConstants();
  CHECK(std::abs(m.mean - 2000 * c.x_inf) < 5);
  CHECK(m.variance / 2000 == doctest::Approx(c.sigma2).epsilon(0.02));
}

TEST_CASE("caps and backend selection") {
  ResourceCaps caps;
  caps.rational_n = 10;
  caps.float_n = 20;
  caps.dp_n = 30;
  CHECK_THROWS_AS(MakeDistribution(11, DistBackend::kRational, Table(), caps), ResourceError);
  CHECK_THROWS_AS(MakeDistribution(21, DistBackend::kFloatFormula, Table(), caps), ResourceError);
  CHECK_THROWS_AS(DpDistribution(31, RateConvention::kFormula, caps), ResourceError);
  CHECK_THROWS_AS(MakeDistribution(0, DistBackend::kFloatFormula, Table()), DomainError);
  CHECK_THROWS_AS(MakeDistribution(2100, DistBackend::kFloatFormula, Table()), DomainError);

  ExactEngine engine(DefaultConstants(), caps);
  CHECK(engine.AutoBackend(10) == DistBackend::kRational);
  CHECK(engine.AutoBackend(20) == DistBackend::kFloatFormula);
  CHECK(engine.AutoBackend(21) == DistBackend::kAsymptoticD);
  CHECK(engine.Distribution(15).backend() == DistBackend::kFloatFormula);

  ::setenv("RUMOUR_MAX_RATIONAL_N", "42", 1);
  CHECK(ResourceCaps::FromEnv().rational_n == 42);
  ::unsetenv("RUMOUR_MAX_RATIONAL_N");
  CHECK(ResourceCaps::FromEnv().rational_n == ResourceCaps{}.rational_n);
}

TEST_CASE("names round-trip") {
  for (auto b : {DistBackend::kRational, DistBackend::kFloatFormula, DistBackend::kAsymptoticD,
                 DistBackend::kDpOracle}) {
    CHECK(ParseDistBackend(ToString(b)) == b);
  }
  for (auto c : {RateConvention::kFormula, RateConvention::kPaperLiteral}) {
    CHECK(ParseRateConvention(ToString(c)) == c);
  }
  CHECK_FALSE(ParseDistBackend("nope").has_value());
}

TEST_CASE("engine table grows safely under concurrent requests") {
  ExactEngine engine;
  std::vector<std::jthread> threads;
  std::vector<int> covered(8, 0);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] { covered[t] = engine.Table(50 + 40 * t)->j_max(); });
  }
  threads.clear();
  for (int t = 0; t < 8; ++t) CHECK(covered[t] >= 50 + 40 * t);
  const auto table = engine.Table(330);
  const auto direct = AutomataTable::ComputeExact(330);
  for (int j = 1; j <= 330; ++j) CHECK(table->value(j) == direct.value(j));
}
