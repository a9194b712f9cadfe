#include "rumour/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rumour/automata.h"
#include "rumour/constants.h"
#include "rumour/errors.h"
#include "rumour/exact_dist.h"
#include "rumour/harness.h"
#include "rumour/rate_functions.h"
#include "rumour/report_io.h"
#include "rumour/simulator.h"

namespace rumour {
namespace {

using nlohmann::json;

// Largest n for which every count is exactly representable in a double.
constexpr double kMaxCount = 9007199254740992.0;

double ParseReal(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(value)) {
    throw UsageError("expected a number, got '" + s + "'");
  }
  return value;
}

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = text.find(sep, start);
    parts.push_back(text.substr(start, at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

std::string Num(double value, OutputFormat format) {
  return FormatDouble(value, format == OutputFormat::kHuman ? 6 : 17);
}

json JsonNum(double value) {
  if (std::isfinite(value)) return value;
  return FormatDouble(value);
}

struct Common {
  bool csv = false;
  bool json = false;

  OutputFormat format() const {
    if (csv) return OutputFormat::kCsv;
    if (json) return OutputFormat::kJson;
    return OutputFormat::kHuman;
  }
};

void AddFormatFlags(CLI::App* cmd, Common& common, bool with_json = true) {
  auto* csv = cmd->add_flag("--csv", common.csv, "CSV output (17 significant digits)");
  if (with_json) {
    auto* js = cmd->add_flag("--json", common.json, "JSON output");
    csv->excludes(js);
  }
}

RateConvention ConventionOrThrow(const std::string& name) {
  const auto c = ParseRateConvention(name);
  if (!c) throw UsageError("unknown rate convention '" + name + "'");
  return *c;
}

// ---- constants

void RunConstants(const Common& common, std::ostream& out) {
  const ModelConstants& c = DefaultConstants();
  const std::pair<const char*, double> fields[] = {
      {"x_inf", c.x_inf}, {"v_inf", c.v_inf}, {"sigma2", c.sigma2}, {"varrho", c.varrho},
      {"kappa", c.kappa}, {"alpha", c.alpha}, {"beta", c.beta}};
  if (common.json) {
    json doc = json::object();
    for (const auto& [name, value] : fields) doc[name] = value;
    out << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [name, value] : fields) out << name << ' ' << Num(value, OutputFormat::kHuman) << '\n';
}

// ---- dj

std::string TruncatedDecimal(const mpz_class& value) {
  std::string digits = value.get_str();
  constexpr std::size_t kKeep = 24;
  if (digits.size() <= kKeep + 8) return digits;
  return digits.substr(0, kKeep) + "...(" + std::to_string(digits.size()) + " digits, " +
         std::to_string(mpz_sizeinbase(value.get_mpz_t(), 2)) + " bits)";
}

void RunDj(const std::string& max_text, const Common& common, std::ostream& out) {
  const std::int64_t j_max = ParseCount(max_text);
  const ResourceCaps caps = ResourceCaps::FromEnv();
  if (j_max > caps.exact_j) {
    throw ResourceError("exact", "j_max=" + std::to_string(j_max) + " exceeds cap " +
                                     std::to_string(caps.exact_j) + " (RUMOUR_MAX_EXACT_J)");
  }
  const AutomataTable table =
      AutomataTable::ComputeExact(static_cast<int>(j_max), DefaultConstants(), caps.exact_j);
  const OutputFormat format = common.format();
  if (format == OutputFormat::kCsv) out << "j,d_j,ln_d_j,asymptotic_ratio\n";
  for (int j = 1; j <= table.j_max(); ++j) {
    if (format == OutputFormat::kCsv) {
      out << j << ',' << table.value(j).get_str() << ',' << Num(table.log_value(j), format) << ','
          << Num(table.AsymptoticRatio(j), format) << '\n';
    } else {
      out << j << ' ' << TruncatedDecimal(table.value(j)) << ' ' << Num(table.log_value(j), format)
          << ' ' << Num(table.AsymptoticRatio(j), format) << '\n';
    }
  }
}

// ---- dist

struct DistOptions {
  std::string n;
  std::string backend = "auto";
  std::string convention = "formula";
  bool check_oracle = false;
};

void RunCheckOracle(std::int64_t n, ExactEngine& engine, RateConvention convention,
                    const Common& common, std::ostream& out) {
  if (n > engine.caps().float_n || n > engine.caps().exact_j) {
    throw ResourceError("float_formula", "check-oracle needs the exact formula at n=" +
                                             std::to_string(n));
  }
  const FinalSizeDistribution formula =
      engine.Distribution(n, n <= engine.caps().rational_n ? DistBackend::kRational
                                                           : DistBackend::kFloatFormula);
  const FinalSizeDistribution dp =
      DpDistribution(n, convention, engine.caps(), engine.constants());
  double max_err = 0;
  const std::int64_t top = std::max(formula.support_size(), dp.support_size());
  for (std::int64_t k = 0; k < top; ++k) {
    max_err = std::max(max_err, std::abs(formula.Pmf(k) - dp.Pmf(k)));
  }
  const double tv = TotalVariation(formula, dp);
  switch (common.format()) {
    case OutputFormat::kCsv:
      out << "n,convention,max_abs_error,total_variation\n"
          << n << ',' << ToString(convention) << ',' << Num(max_err, OutputFormat::kCsv) << ','
          << Num(tv, OutputFormat::kCsv) << '\n';
      break;
    case OutputFormat::kJson:
      out << json{{"n", n},
                  {"convention", ToString(convention)},
                  {"max_abs_error", JsonNum(max_err)},
                  {"total_variation", JsonNum(tv)}}
                 .dump(2)
          << '\n';
      break;
    case OutputFormat::kHuman:
      out << "n " << n << " convention " << ToString(convention) << " max_abs_error "
          << Num(max_err, OutputFormat::kHuman) << " total_variation "
          << Num(tv, OutputFormat::kHuman) << '\n';
      break;
  }
}

void RunDist(const DistOptions& opt, const Common& common, std::ostream& out) {
  const std::int64_t n = ParseCount(opt.n);
  const RateConvention convention = ConventionOrThrow(opt.convention);
  ExactEngine engine;
  if (opt.check_oracle) {
    RunCheckOracle(n, engine, convention, common, out);
    return;
  }
  std::optional<DistBackend> backend;
  if (opt.backend == "auto") {
    backend = engine.AutoBackend(n);
  } else {
    backend = ParseDistBackend(opt.backend);
    if (!backend) throw UsageError("unknown backend '" + opt.backend + "'");
  }
  if (convention != RateConvention::kFormula && *backend != DistBackend::kDpOracle) {
    throw DomainError("the paper-literal convention is only available with --backend dp_oracle");
  }
  const FinalSizeDistribution dist =
      *backend == DistBackend::kDpOracle
          ? DpDistribution(n, convention, engine.caps(), engine.constants())
          : engine.Distribution(n, *backend);

  std::int64_t lo = 0;
  std::int64_t hi = dist.support_size() - 1;
  if (dist.lazy()) {
    // Evaluated per point; emit the bulk only.
    const double dn = static_cast<double>(n);
    const double w = 8 * std::sqrt(dist.constants().sigma2 * dn);
    const double centre = dn * dist.constants().x_inf;
    lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(centre - w)));
    hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(std::floor(centre + w)));
  }
  const OutputFormat format = common.format();
  if (format == OutputFormat::kJson) {
    json rows = json::array();
    for (std::int64_t k = lo; k <= hi; ++k) {
      const double lp = dist.LogPmf(k);
      rows.push_back({{"k", k}, {"p", JsonNum(dist.Pmf(k))}, {"log_p", JsonNum(lp)}});
    }
    out << json{{"n", n}, {"backend", ToString(dist.backend())},
                {"convention", ToString(dist.convention())}, {"rows", rows}}
               .dump(2)
        << '\n';
    return;
  }
  if (format == OutputFormat::kCsv) out << "k,p,log_p\n";
  const char sep = format == OutputFormat::kCsv ? ',' : ' ';
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double lp = dist.LogPmf(k);
    out << k << sep << Num(dist.Pmf(k), format) << sep << Num(lp, format) << '\n';
  }
}

// ---- simulate

struct SimOptions {
  std::string n;
  std::string samples;
  std::uint64_t seed = SimConfig{}.seed;
  int streams = 1;
  int threads = 1;
  std::string convention = "formula";
  bool trajectory = false;
};

void RunSimulate(const SimOptions& opt, const Common& common, std::ostream& out) {
  SimConfig config;
  config.n = ParseCount(opt.n);
  config.convention = ConventionOrThrow(opt.convention);
  config.seed = opt.seed;
  config.streams = opt.streams;
  config.threads = opt.threads;
  if (config.streams < 1 || config.threads < 1) {
    throw DomainError("--streams and --threads must be positive");
  }
  const OutputFormat format = common.format();
  const char sep = format == OutputFormat::kCsv ? ',' : ' ';
  if (opt.trajectory) {
    const Trajectory path = SampleTrajectory(config);
    if (format == OutputFormat::kCsv) out << "time,i,j,z\n";
    for (const auto& e : path.events) {
      out << Num(e.time, format) << sep << e.state.ignorants << sep << e.state.spreaders << sep
          << e.state.stiflers() << '\n';
    }
    return;
  }
  if (opt.samples.empty()) throw UsageError("simulate needs --samples (or --trajectory)");
  const std::int64_t m = ParseCount(opt.samples);
  const std::vector<std::int64_t> hist = SampleBatch(config, m);
  if (format == OutputFormat::kCsv) out << "k,count,frequency\n";
  for (std::size_t k = 0; k < hist.size(); ++k) {
    if (hist[k] == 0) continue;
    out << k << sep << hist[k] << sep
        << Num(static_cast<double>(hist[k]) / static_cast<double>(m), format) << '\n';
  }
}

// ---- rates

void RunRates(const std::string& grid, const std::string& which, const Common& common,
              std::ostream& out) {
  const RateFunctions rates(DefaultConstants());
  std::vector<std::string> columns;
  if (which.empty()) {
    columns = {"h", "H", "J"};
  } else if (which == "h" || which == "H" || which == "J") {
    columns = {which};
  } else {
    throw UsageError("--which must be h, H or J");
  }
  const std::vector<double> xs = ParseRealRange(grid);
  const bool only_h = columns.size() == 1 && columns[0] == "h";
  auto eval = [&](const std::string& col, double x) {
    if (col == "H") return rates.H(x);
    if (col == "J") return rates.J(x);
    if (x >= 0 && x < 1) return rates.h(x);
    if (only_h) return rates.h(x);  // throws the domain error
    return std::nan("");
  };
  const OutputFormat format = common.format();
  const char sep = format == OutputFormat::kCsv ? ',' : ' ';
  out << 'x';
  for (const auto& c : columns) out << sep << c;
  out << '\n';
  for (double x : xs) {
    out << Num(x, format);
    for (const auto& c : columns) out << sep << Num(eval(c, x), format);
    out << '\n';
  }
}

// ---- verify

struct VerifyOptions {
  std::string kind;
  std::string n_grid;
  std::string scale = "log_quarter";
  std::string z;
  std::string x = "0.15,0.3";
  std::string l = "2";
  double delta = kDefaultEndpointDelta;
  int threads = 1;
};

void RunVerify(const VerifyOptions& opt, const Common& common, std::ostream& out) {
  const auto scale = ScaleChoice::Parse(opt.scale);
  if (!scale) throw UsageError("unknown scale '" + opt.scale + "'");
  if (opt.threads < 1) throw DomainError("--threads must be positive");
  std::string grid_text = opt.n_grid;
  if (grid_text.empty()) {
    if (opt.kind == "ldp") grid_text = "500,1000,2000";
    else if (opt.kind == "clt") grid_text = "100,400,1600";
    else if (opt.kind == "tightness") grid_text = "1e4,1e6";
    else grid_text = "1e4:1e10:x100";
  }
  const std::vector<std::int64_t> grid = ParseNGrid(grid_text);
  std::string z_text = opt.z;
  if (z_text.empty()) z_text = opt.kind == "local" ? "-2,-1,0,1,2" : "1";

  ExactEngine engine;
  Harness harness(engine, opt.threads);
  DeviationReport report;
  if (opt.kind == "mdp") {
    report = harness.MdpTable(ParseRealList(z_text), *scale, grid);
  } else if (opt.kind == "ldp") {
    report = harness.LdpTable(ParseRealList(opt.x), grid);
  } else if (opt.kind == "clt") {
    report = harness.CltCheck(grid);
  } else if (opt.kind == "local") {
    report = harness.LocalMdpCheck(ParseRealList(z_text), *scale, grid);
  } else if (opt.kind == "tightness") {
    report = harness.TightnessCheck(ParseRealList(opt.l), *scale, grid, opt.delta);
  } else if (opt.kind == "endpoint") {
    report = harness.EndpointProbe(grid, *scale);
  } else {
    throw UsageError("unknown verify kind '" + opt.kind + "'");
  }
  WriteReport(out, report, common.format());
}

}  // namespace

std::int64_t ParseCount(std::string_view text) {
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc() && end == text.data() + text.size()) {
    if (value < 1) throw DomainError("expected a positive count, got " + std::string(text));
    return value;
  }
  const double real = ParseReal(text);
  if (!(real >= 1) || real > kMaxCount || real != std::floor(real)) {
    throw DomainError("expected a positive integer count, got " + std::string(text));
  }
  return static_cast<std::int64_t>(real);
}

std::vector<std::int64_t> ParseNGrid(std::string_view text) {
  std::vector<std::int64_t> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = Split(text, ':');
    if (parts.size() != 3) throw UsageError("n grid range must be a:b:xfactor");
    const std::int64_t a = ParseCount(parts[0]);
    const std::int64_t b = ParseCount(parts[1]);
    std::string_view f_text = parts[2];
    if (!f_text.empty() && (f_text.front() == 'x' || f_text.front() == 'X')) f_text.remove_prefix(1);
    const double factor = ParseReal(f_text);
    if (!(factor > 1)) throw DomainError("n grid factor must exceed 1");
    if (b < a) throw DomainError("n grid range must have a <= b");
    for (int i = 0;; ++i) {
      const double v = std::round(static_cast<double>(a) * std::pow(factor, i));
      if (v > static_cast<double>(b) * (1 + 1e-12)) break;
      grid.push_back(static_cast<std::int64_t>(v));
    }
  } else {
    for (auto part : Split(text, ',')) grid.push_back(ParseCount(part));
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw DomainError("n grid must be strictly increasing");
  }
  return grid;
}

std::vector<double> ParseRealRange(std::string_view text) {
  const auto parts = Split(text, ':');
  if (parts.size() != 3) throw UsageError("range must be a:b:step");
  const double a = ParseReal(parts[0]);
  const double b = ParseReal(parts[1]);
  const double step = ParseReal(parts[2]);
  if (!(step > 0)) throw DomainError("range step must be positive");
  if (b < a) throw DomainError("range must have a <= b");
  const double count = std::floor((b - a) / step * (1 + 1e-12) + 1e-9);
  if (count > 1e7) throw DomainError("range has too many points");
  std::vector<double> xs;
  for (std::int64_t i = 0; i <= static_cast<std::int64_t>(count); ++i) {
    xs.push_back(a + static_cast<double>(i) * step);
  }
  return xs;
}

std::vector<double> ParseRealList(std::string_view text) {
  std::vector<double> values;
  for (auto part : Split(text, ',')) values.push_back(ParseReal(part));
  return values;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maki-Thompson rumour model: exact laws, simulation, deviation checks", "rumour"};
  app.require_subcommand(1);

  Common constants_common;
  auto* constants_cmd = app.add_subcommand("constants", "Print the model constants");
  constants_cmd->add_flag("--json", constants_common.json, "JSON output");

  Common dj_common;
  std::string dj_max;
  auto* dj_cmd = app.add_subcommand("dj", "Exact automata numbers d_1..d_J");
  dj_cmd->add_option("--max", dj_max, "Largest index J")->required();
  AddFormatFlags(dj_cmd, dj_common, false);

  Common dist_common;
  DistOptions dist;
  auto* dist_cmd = app.add_subcommand("dist", "Final ignorant count distribution");
  dist_cmd->add_option("--n", dist.n, "Population size")->required();
  dist_cmd->add_option("--backend", dist.backend,
                       "auto, rational, float_formula, asymptotic_d or dp_oracle");
  dist_cmd->add_option("--rate-convention", dist.convention, "formula or paper-literal");
  dist_cmd->add_flag("--check-oracle", dist.check_oracle, "Compare the formula with the jump-chain DP");
  AddFormatFlags(dist_cmd, dist_common);

  Common sim_common;
  SimOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo final sizes or one trajectory");
  sim_cmd->add_option("--n", sim.n, "Population size")->required();
  sim_cmd->add_option("--samples", sim.samples, "Number of runs");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  sim_cmd->add_option("--streams", sim.streams, "Independent RNG streams");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (results do not depend on it)");
  sim_cmd->add_option("--rate-convention", sim.convention, "formula or paper-literal");
  sim_cmd->add_flag("--trajectory", sim.trajectory, "Emit one event-time path (time,i,j,z)");
  AddFormatFlags(sim_cmd, sim_common, false);

  Common rates_common;
  std::string rates_grid;
  std::string rates_which;
  auto* rates_cmd = app.add_subcommand("rates", "Tabulate the rate functions");
  rates_cmd->add_option("--grid", rates_grid, "a:b:step")->required();
  rates_cmd->add_option("--which", rates_which, "h, H or J (default all)");
  AddFormatFlags(rates_cmd, rates_common, false);

  Common verify_common;
  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Deviation and convergence reports");
  verify_cmd->add_option("kind", verify.kind, "mdp, ldp, clt, local, tightness or endpoint")
      ->required()
      ->check(CLI::IsMember({"mdp", "ldp", "clt", "local", "tightness", "endpoint"}));
  verify_cmd->add_option("--n-grid", verify.n_grid, "Comma list or a:b:xfactor");
  verify_cmd->add_option("--scale", verify.scale, "log_quarter, loglog_half or log_pow:<p>");
  verify_cmd->add_option("--z", verify.z, "Comma list of z values (mdp, local)");
  verify_cmd->add_option("--x", verify.x, "Comma list of x values (ldp)");
  verify_cmd->add_option("--L", verify.l, "Comma list of L values (tightness)");
  verify_cmd->add_option("--delta", verify.delta, "Endpoint layer width (tightness)");
  verify_cmd->add_option("--threads", verify.threads, "Worker threads (results do not depend on it)");
  AddFormatFlags(verify_cmd, verify_common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (constants_cmd->parsed()) {
      RunConstants(constants_common, out);
    } else if (dj_cmd->parsed()) {
      RunDj(dj_max, dj_common, out);
    } else if (dist_cmd->parsed()) {
      RunDist(dist, dist_common, out);
    } else if (sim_cmd->parsed()) {
      RunSimulate(sim, sim_common, out);
    } else if (rates_cmd->parsed()) {
      RunRates(rates_grid, rates_which, rates_common, out);
    } else if (verify_cmd->parsed()) {
      RunVerify(verify, verify_common, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ResourceError& e) {
    err << "error: resource cap: " << e.what() << '\n';
    return kExitDomain;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace rumour
