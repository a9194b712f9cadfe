#ifndef RUMOUR_SIMULATOR_H_
#define RUMOUR_SIMULATOR_H_

#include <cstdint>
#include <random>
#include <vector>

#include "rumour/exact_dist.h"

namespace rumour {

// (ignorants, spreaders) in a closed population of n + 1.
struct ChainState {
  std::int64_t ignorants;
  std::int64_t spreaders;
  std::int64_t population;  // n + 1, conserved

  std::int64_t stiflers() const { return population - ignorants - spreaders; }
  bool absorbing() const { return spreaders == 0; }
  bool operator==(const ChainState&) const = default;
};

struct TrajectoryEvent {
  double time;
  ChainState state;
};

struct Trajectory {
  std::vector<TrajectoryEvent> events;  // starts with (0, initial state)
  double absorption_time = 0;

  const ChainState& final_state() const { return events.back().state; }
};

struct SimConfig {
  std::int64_t n = 1;
  RateConvention convention = RateConvention::kFormula;
  std::uint64_t seed = 0x5eed;
  int streams = 1;
  // Worker threads. Never changes results, only wall time.
  int threads = 1;
};

struct StepProbabilities {
  double convert;
  double stifle;
};

// Jump probabilities out of a non-absorbing state. With conversion rate ij
// and stifling rate j s (s = n - i or n + 1 - i), the spreader count cancels.
StepProbabilities ComputeStepProbabilities(const ChainState& state, RateConvention convention);

// Generator for one stream. Seeded from (seed, stream) through seed_seq, so
// streams are decorrelated and independent of how they are scheduled.
std::mt19937_64 MakeStreamEngine(std::uint64_t seed, std::uint64_t stream);

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double UniformUnit(std::mt19937_64& engine);

// One draw of X_n from the jump chain, using stream 0.
std::int64_t SampleFinalSize(const SimConfig& config);
std::int64_t SampleFinalSize(std::int64_t n, RateConvention convention, std::mt19937_64& engine);

// m draws split across config.streams streams (stream s takes m/streams
// draws, the first m % streams streams one extra). Counts indexed by k in
// [0, n]. Identical for a given (seed, streams, m) at any thread count.
std::vector<std::int64_t> SampleBatch(const SimConfig& config, std::int64_t m);
// Histogram of a single stream's share.
std::vector<std::int64_t> SampleStream(const SimConfig& config, int stream, std::int64_t draws);
std::int64_t StreamShare(std::int64_t m, int streams, int stream);

// Continuous-time path with exponential holding times, using stream 0.
Trajectory SampleTrajectory(const SimConfig& config);
Trajectory SampleTrajectory(std::int64_t n, RateConvention convention, std::mt19937_64& engine);

// Empirical distribution from a histogram; total variation against a
// reference distribution.
double TotalVariation(const std::vector<std::int64_t>& histogram,
                      const FinalSizeDistribution& reference);

}  // namespace rumour

#endif  // RUMOUR_SIMULATOR_H_
