#include "rumour/simulator.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include "rumour/errors.h"

namespace rumour {
namespace {

void Validate(const SimConfig& config) {
  if (config.n < 1) throw DomainError("simulation: n must be >= 1");
  if (config.streams < 1) throw DomainError("simulation: streams must be >= 1");
  if (config.threads < 1) throw DomainError("simulation: threads must be >= 1");
}

ChainState Initial(std::int64_t n) { return {n, 1, n + 1}; }

}  // namespace

StepProbabilities ComputeStepProbabilities(const ChainState& state, RateConvention convention) {
  if (state.absorbing()) throw DomainError("step probabilities: state is absorbing");
  const std::int64_t n = state.population - 1;
  const std::int64_t others =
      convention == RateConvention::kFormula ? n - state.ignorants : n + 1 - state.ignorants;
  const double convert =
      static_cast<double>(state.ignorants) / static_cast<double>(state.ignorants + others);
  return {convert, 1 - convert};
}

std::mt19937_64 MakeStreamEngine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

double UniformUnit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::int64_t SampleFinalSize(std::int64_t n, RateConvention convention,
                             std::mt19937_64& engine) {
  ChainState state = Initial(n);
  while (!state.absorbing()) {
    const StepProbabilities p = ComputeStepProbabilities(state, convention);
    if (UniformUnit(engine) < p.convert) {
      --state.ignorants;
      ++state.spreaders;
    } else {
      --state.spreaders;
    }
  }
  return state.ignorants;
}

std::int64_t SampleFinalSize(const SimConfig& config) {
  Validate(config);
  auto engine = MakeStreamEngine(config.seed, 0);
  return SampleFinalSize(config.n, config.convention, engine);
}

std::int64_t StreamShare(std::int64_t m, int streams, int stream) {
  return m / streams + (stream < m % streams ? 1 : 0);
}

std::vector<std::int64_t> SampleStream(const SimConfig& config, int stream, std::int64_t draws) {
  Validate(config);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(config.n) + 1, 0);
  auto engine = MakeStreamEngine(config.seed, static_cast<std::uint64_t>(stream));
  for (std::int64_t d = 0; d < draws; ++d) {
    ++counts[static_cast<std::size_t>(SampleFinalSize(config.n, config.convention, engine))];
  }
  return counts;
}

std::vector<std::int64_t> SampleBatch(const SimConfig& config, std::int64_t m) {
  Validate(config);
  if (m < 1) throw DomainError("SampleBatch: m must be >= 1");
  std::vector<std::vector<std::int64_t>> per_stream(static_cast<std::size_t>(config.streams));
  const int workers = std::min(config.threads, config.streams);
  auto work = [&](int worker) {
    for (int s = worker; s < config.streams; s += workers) {
      per_stream[static_cast<std::size_t>(s)] =
          SampleStream(config, s, StreamShare(m, config.streams, s));
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  std::vector<std::int64_t> merged(static_cast<std::size_t>(config.n) + 1, 0);
  for (const auto& counts : per_stream) {
    for (std::size_t k = 0; k < merged.size(); ++k) merged[k] += counts[k];
  }
  return merged;
}

Trajectory SampleTrajectory(std::int64_t n, RateConvention convention,
                            std::mt19937_64& engine) {
  Trajectory path;
  ChainState state = Initial(n);
  double time = 0;
  path.events.push_back({time, state});
  while (!state.absorbing()) {
    const std::int64_t others =
        convention == RateConvention::kFormula ? n - state.ignorants : n + 1 - state.ignorants;
    const double rate = static_cast<double>(state.spreaders) *
                        static_cast<double>(state.ignorants + others);
    // 1 - U lies in (0, 1], so the holding time is finite.
    time += -std::log(1 - UniformUnit(engine)) / rate;
    const StepProbabilities p = ComputeStepProbabilities(state, convention);
    if (UniformUnit(engine) < p.convert) {
      --state.ignorants;
      ++state.spreaders;
    } else {
      --state.spreaders;
    }
    path.events.push_back({time, state});
  }
  path.absorption_time = time;
  return path;
}

Trajectory SampleTrajectory(const SimConfig& config) {
  Validate(config);
  auto engine = MakeStreamEngine(config.seed, 0);
  return SampleTrajectory(config.n, config.convention, engine);
}

double TotalVariation(const std::vector<std::int64_t>& histogram,
                      const FinalSizeDistribution& reference) {
  std::int64_t total = 0;
  for (auto c : histogram) total += c;
  if (total == 0) throw DomainError("TotalVariation: empty histogram");
  const auto size = std::max<std::int64_t>(static_cast<std::int64_t>(histogram.size()),
                                           reference.support_size());
  long double sum = 0;
  for (std::int64_t k = 0; k < size; ++k) {
    const double empirical =
        k < static_cast<std::int64_t>(histogram.size())
            ? static_cast<double>(histogram[static_cast<std::size_t>(k)]) / total
            : 0.0;
    sum += std::abs(empirical - reference.Pmf(k));
  }
  return static_cast<double>(sum / 2);
}

}  // namespace rumour
