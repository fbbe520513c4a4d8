#ifndef BROKENSTICK_RACE_DATA_H_
#define BROKENSTICK_RACE_DATA_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "brokenstick/orderstats.h"

namespace brokenstick {

struct RaceEntry {
  std::string horse_id;
  double decimal_odds = 0.0;  // payout per unit stake, stake included
  bool won = false;
};

struct RaceRecord {
  std::string race_id;
  std::vector<RaceEntry> entries;

  int field_size() const { return static_cast<int>(entries.size()); }
};

struct ParseOptions {
  // Accept a race when the implied odds sum lies in [1 - delta, 1 + delta].
  double overround_delta = 0.10;
};

// One line of the rejection log. `line` is set when a specific input row is
// at fault; `race_id` is empty for rows too malformed to attribute.
struct Rejection {
  std::string race_id;
  std::optional<std::size_t> line;
  std::string reason;
};

struct ParseResult {
  std::vector<RaceRecord> races;  // in order of first appearance
  std::vector<Rejection> rejections;
  // Distinct race ids seen; accepted + rejected races always add up to it.
  std::size_t race_groups = 0;
};

// Reads the CSV schema `race_id,horse_id,decimal_odds,won`. Rows for one race
// may be scattered through the file. A bad race is logged and skipped; only a
// missing or wrong header throws (std::runtime_error).
ParseResult parse_races(std::istream& in, const ParseOptions& options = {});

// Writes records in the same schema, decimal odds at full round-trip
// precision.
void write_races_csv(std::ostream& out, const std::vector<RaceRecord>& races);

struct RankedEntry {
  int rank = 0;
  std::string horse_id;
  double implied_odds = 0.0;
  bool won = false;
};

struct RankedRace {
  std::string race_id;
  std::vector<RankedEntry> ranked;  // rank 1 (favourite) first
  // Adjacent pairs with identical implied odds, ordered by horse_id.
  int tied_pairs = 0;

  int field_size() const { return static_cast<int>(ranked.size()); }
  const RankedEntry& winner() const;
  const RankedEntry& at(RankSelector selector) const;
};

// Sorts horses by implied odds 1/decimal_odds, descending; equal odds are
// ordered by ascending horse_id. With `renormalize`, implied odds are divided
// by their sum so each race sums to exactly 1.
RankedRace rank_race(const RaceRecord& race, bool renormalize = false);

// Inclusive field-size range; `hi` empty means unbounded.
struct FieldSizeRange {
  std::string name;
  int lo = 1;
  std::optional<int> hi;

  bool contains(int n) const { return n >= lo && (!hi || n <= *hi); }
  std::string describe() const;
};

struct BucketSpec {
  std::vector<FieldSizeRange> buckets;

  // all (n >= min), small (min..7), medium (8..10), large (>= 11).
  static BucketSpec defaults(int min_field_size = 5);
  // Parses "name:lo-hi" or "name:lo-" (open ended).
  static FieldSizeRange parse_range(const std::string& text);
  void validate() const;
};

std::vector<RankedRace> select_bucket(const std::vector<RankedRace>& races,
                                      const FieldSizeRange& bucket);

// Counts of n over the races inside `bucket`. Throws std::invalid_argument
// naming the bucket when no race falls inside it.
FieldSizeHistogram field_size_histogram(const std::vector<RankedRace>& races,
                                        const FieldSizeRange& bucket);

}  // namespace brokenstick

#endif  // BROKENSTICK_RACE_DATA_H_
