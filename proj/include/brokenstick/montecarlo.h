#ifndef BROKENSTICK_MONTECARLO_H_
#define BROKENSTICK_MONTECARLO_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "brokenstick/orderstats.h"
#include "brokenstick/rng.h"

namespace brokenstick {

enum class Construction {
  kUniformCuts,       // n-1 uniform cut points on [0, 1]
  kExponentialRatio,  // X_i / sum_j X_j with X_i ~ Exp(1)
};

std::string_view to_string(Construction c);
// Accepts "uniform-cuts" and "exponential-ratio".
Construction parse_construction(std::string_view name);

struct SimConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  Construction construction = Construction::kUniformCuts;
  // Samples per chunk. Chunk c always uses RNG stream c, so estimates depend
  // on (seed, samples, chunk_size, construction) but never on `threads`.
  std::uint64_t chunk_size = 1 << 16;
  // 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
};

// Segment lengths of one random division, sorted descending.
struct SortedDivision {
  std::vector<double> segments;

  int field_size() const { return static_cast<int>(segments.size()); }
  double kth_largest(Rank k) const { return segments.at(k.value() - 1); }
};

SortedDivision sample_division_uniform(FieldSize n, Rng& rng);
SortedDivision sample_division_exponential(FieldSize n, Rng& rng);
SortedDivision sample_division(FieldSize n, Construction construction,
                               Rng& rng);

struct RaceDraw {
  SortedDivision division;
  Rank winner_rank{1};
};

// Samples a division, then drops a uniform point on the stick; the winner is
// the rank of the segment that receives it.
RaceDraw sample_race(FieldSize n, Rng& rng,
                     Construction construction = Construction::kUniformCuts);

// Monte Carlo estimate with its standard error from the sample variance.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
  std::uint64_t count = 0;

  // |value - reference| in standard errors. A zero SE arises only when every
  // sample agreed; it is then floored at 1/count (one event's worth).
  double gap_in_se(double reference) const;
};

// Estimate of a proportion from `hits` out of `count` trials (binomial SE).
Estimate proportion_estimate(std::uint64_t hits, std::uint64_t count);

// Empirical P[z_(k) > x] at every x in `xs` (ascending, nonempty).
std::vector<Estimate> estimate_ccdf(FieldSize n, Rank k,
                                    std::span<const double> xs,
                                    const SimConfig& config);

// Same as estimate_ccdf for every rank at once from one set of divisions.
// grids[k-1] holds the ascending evaluation points for rank k.
std::vector<std::vector<Estimate>> estimate_ccdf_all_ranks(
    FieldSize n, const std::vector<std::vector<double>>& grids,
    const SimConfig& config);

// Per-rank summaries of simulated races.
struct RaceSimulation {
  int field_size = 0;
  std::uint64_t races = 0;
  std::vector<Estimate> mean;               // E[z_(k)]
  std::vector<Estimate> second_moment;      // E[z_(k)^2]
  std::vector<Estimate> win_probability;    // P[I_(k) = 1]
  std::vector<Estimate> conditional_mean;   // E[z_(k) | I_(k) = 1]
  Estimate winner_segment_mean;             // E[length of winning segment]
};

RaceSimulation simulate_races(FieldSize n, const SimConfig& config);

// config.samples draws of z_(k), in chunk order.
std::vector<double> sample_order_statistic(FieldSize n, Rank k,
                                           const SimConfig& config);

}  // namespace brokenstick

#endif  // BROKENSTICK_MONTECARLO_H_
