#ifndef BROKENSTICK_ANALYSIS_H_
#define BROKENSTICK_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "brokenstick/orderstats.h"
#include "brokenstick/race_data.h"

namespace brokenstick {

// One report value. An absent cell keeps a note saying why.
struct Cell {
  std::optional<double> value;
  double se = 0.0;           // 0 for theory cells
  std::uint64_t count = 0;   // observations behind an empirical cell
  std::string note;

  bool present() const { return value.has_value(); }
  static Cell absent(std::string why) { return Cell{std::nullopt, 0.0, 0, std::move(why)}; }
  static Cell theory(double v) { return Cell{v, 0.0, 0, {}}; }
};

// Ranks reported in every table: 1..4 and the longshot.
std::vector<RankSelector> reported_ranks();

// Unconditional row: mean implied odds E[Q_(k)], win frequency E[P_(k)] and
// the broken-stick expectation E[z_(k)] mixed over the bucket's field sizes.
struct TableRow {
  RankSelector rank = RankSelector::longshot();
  Cell implied;      // Q
  Cell win_rate;     // P
  Cell theory;       // z
};

// Conditional-on-win row.
struct ConditionalRow {
  RankSelector rank = RankSelector::longshot();
  Cell implied_given_win;  // E[Q_(k) | rank k won]
  // E[z_(k) | I_(k)=1] with field sizes weighted by how often rank k wins in
  // each: sum_n w_n E[z^2] / sum_n w_n E[z]. This is the expectation of
  // implied_given_win.
  Cell theory;
  // Plain mixture of the per-n conditional means, sum_n w_n E[z^2]/E[z].
  Cell theory_flat;
};

struct WinnerRow {
  Cell implied;  // mean implied odds of the winning horse
  Cell theory;   // mixture of 2/(n+1)
};

struct BucketReport {
  FieldSizeRange bucket;
  std::uint64_t races = 0;
  FieldSizeHistogram histogram;  // of the races used for the theory cells
  std::vector<TableRow> table;
  std::vector<ConditionalRow> conditional;
  WinnerRow winner;
  std::vector<std::string> diagnostics;
};

struct AnalysisReport {
  std::vector<BucketReport> buckets;
  std::uint64_t accepted_races = 0;
  std::uint64_t rejected_races = 0;
  std::uint64_t dropped_below_min = 0;
  std::uint64_t tied_pairs = 0;
  bool renormalized = false;
};

struct AnalysisOptions {
  BucketSpec buckets = BucketSpec::defaults();
  int min_field_size = 5;
  // Replaces every bucket's empirical field-size histogram for theory cells.
  std::optional<int> theory_field_size;
};

// Theory histogram for a bucket: the empirical one, or the override.
FieldSizeHistogram theory_histogram(const std::vector<RankedRace>& bucket_races,
                                    const FieldSizeRange& bucket,
                                    const std::optional<int>& override_n);

// Q/P/z rows for one bucket. Throws std::invalid_argument if the bucket
// selects no race.
std::vector<TableRow> empirical_table(
    const std::vector<RankedRace>& races, const FieldSizeRange& bucket,
    const std::optional<int>& theory_field_size = std::nullopt);

std::vector<ConditionalRow> conditional_table(
    const std::vector<RankedRace>& races, const FieldSizeRange& bucket,
    const std::optional<int>& theory_field_size = std::nullopt);

WinnerRow winner_odds_average(
    const std::vector<RankedRace>& races, const FieldSizeRange& bucket,
    const std::optional<int>& theory_field_size = std::nullopt);

BucketReport analyze_bucket(const std::vector<RankedRace>& races,
                            const FieldSizeRange& bucket,
                            const std::optional<int>& theory_field_size);

// Ranks, filters by min_field_size and fills every configured bucket. Empty
// buckets are kept with all cells absent.
AnalysisReport analyze_races(const std::vector<RankedRace>& races,
                             const AnalysisOptions& options);

// Survival curve as (x, P[X > x]) points, x ascending.
struct EccdfCurve {
  std::vector<std::pair<double, double>> points;
};

struct EccdfComparison {
  RankSelector rank = RankSelector::longshot();
  std::uint64_t sample_size = 0;
  EccdfCurve empirical;
  EccdfCurve theory;
  // sup |empirical - theory|, including the left limits of empirical jumps.
  double sup_distance = 0.0;
};

// Pools Q_(k) over every race given (all field sizes together); the theory
// curve is sum_n w_n P[z_(k(n)) > x | n] with w_n from the same races. The
// default grid is the sorted set of observed values.
EccdfComparison eccdf_per_rank(
    const std::vector<RankedRace>& races, RankSelector rank,
    const std::optional<std::vector<double>>& grid = std::nullopt);

}  // namespace brokenstick

#endif  // BROKENSTICK_ANALYSIS_H_
