#include "brokenstick/analysis.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brokenstick {

namespace {

Cell mean_cell(const std::vector<double>& values) {
  if (values.empty()) return Cell::absent("no observations");
  Cell c;
  c.count = values.size();
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double squares = 0.0;
  for (double v : values) squares += (v - mean) * (v - mean);
  c.value = mean;
  c.se = values.size() > 1 ? std::sqrt(squares / (n - 1.0) / n) : 0.0;
  return c;
}

Cell proportion_cell(std::uint64_t hits, std::uint64_t count) {
  if (count == 0) return Cell::absent("no observations");
  Cell c;
  c.count = count;
  const double p = static_cast<double>(hits) / static_cast<double>(count);
  c.value = p;
  c.se = std::sqrt(p * (1.0 - p) / static_cast<double>(count));
  return c;
}

std::string undefined_note(RankSelector rank, int smallest) {
  return "rank " + rank.label() + " undefined: bucket has races with n=" +
         std::to_string(smallest);
}

// Theory cell, or absent when the rank does not exist for some n.
Cell theory_cell(const FieldSizeHistogram& hist, RankSelector rank,
                 Statistic statistic) {
  if (!rank.defined_for(hist.min_field_size())) {
    return Cell::absent(undefined_note(rank, hist.min_field_size()));
  }
  return Cell::theory(mixture(hist, statistic, rank));
}

int smallest_field(const std::vector<RankedRace>& races) {
  int smallest = races.front().field_size();
  for (const auto& r : races) smallest = std::min(smallest, r.field_size());
  return smallest;
}

}  // namespace

std::vector<RankSelector> reported_ranks() {
  return {RankSelector::fixed(1), RankSelector::fixed(2),
          RankSelector::fixed(3), RankSelector::fixed(4),
          RankSelector::longshot()};
}

FieldSizeHistogram theory_histogram(const std::vector<RankedRace>& bucket_races,
                                    const FieldSizeRange& bucket,
                                    const std::optional<int>& override_n) {
  FieldSizeHistogram hist = field_size_histogram(bucket_races, bucket);
  if (override_n) return FieldSizeHistogram({{*override_n, 1}});
  return hist;
}

std::vector<TableRow> empirical_table(const std::vector<RankedRace>& races,
                                      const FieldSizeRange& bucket,
                                      const std::optional<int>& theory_field_size) {
  const auto hist = theory_histogram(races, bucket, theory_field_size);
  const auto selected = select_bucket(races, bucket);
  const int smallest = smallest_field(selected);

  std::vector<TableRow> rows;
  for (RankSelector rank : reported_ranks()) {
    TableRow row;
    row.rank = rank;
    row.theory = theory_cell(hist, rank, Statistic::kMean);
    if (!rank.defined_for(smallest)) {
      row.implied = Cell::absent(undefined_note(rank, smallest));
      row.win_rate = Cell::absent(undefined_note(rank, smallest));
    } else {
      std::vector<double> implied;
      std::uint64_t wins = 0;
      for (const auto& race : selected) {
        const auto& entry = race.at(rank);
        implied.push_back(entry.implied_odds);
        wins += entry.won ? 1 : 0;
      }
      row.implied = mean_cell(implied);
      row.win_rate = proportion_cell(wins, selected.size());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ConditionalRow> conditional_table(
    const std::vector<RankedRace>& races, const FieldSizeRange& bucket,
    const std::optional<int>& theory_field_size) {
  const auto hist = theory_histogram(races, bucket, theory_field_size);
  const auto selected = select_bucket(races, bucket);
  const int smallest = smallest_field(selected);

  std::vector<ConditionalRow> rows;
  for (RankSelector rank : reported_ranks()) {
    ConditionalRow row;
    row.rank = rank;
    if (!rank.defined_for(hist.min_field_size())) {
      row.theory = Cell::absent(undefined_note(rank, hist.min_field_size()));
      row.theory_flat = row.theory;
    } else {
      row.theory = Cell::theory(size_biased_conditional_mixture(hist, rank));
      row.theory_flat =
          Cell::theory(mixture(hist, Statistic::kConditionalMean, rank));
    }
    if (!rank.defined_for(smallest)) {
      row.implied_given_win = Cell::absent(undefined_note(rank, smallest));
    } else {
      std::vector<double> implied;
      for (const auto& race : selected) {
        const auto& entry = race.at(rank);
        if (entry.won) implied.push_back(entry.implied_odds);
      }
      row.implied_given_win = implied.empty()
                                  ? Cell::absent("rank " + rank.label() +
                                                 " never won in this bucket")
                                  : mean_cell(implied);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

WinnerRow winner_odds_average(const std::vector<RankedRace>& races,
                              const FieldSizeRange& bucket,
                              const std::optional<int>& theory_field_size) {
  const auto hist = theory_histogram(races, bucket, theory_field_size);
  std::vector<double> implied;
  for (const auto& race : select_bucket(races, bucket)) {
    implied.push_back(race.winner().implied_odds);
  }
  return {mean_cell(implied),
          Cell::theory(mixture(hist, Statistic::kWinnerSegmentMean,
                               RankSelector::fixed(1)))};
}

BucketReport analyze_bucket(const std::vector<RankedRace>& races,
                            const FieldSizeRange& bucket,
                            const std::optional<int>& theory_field_size) {
  BucketReport report;
  report.bucket = bucket;
  const auto selected = select_bucket(races, bucket);
  report.races = selected.size();
  if (selected.empty()) {
    const std::string why = "empty selection for bucket " + bucket.describe();
    report.diagnostics.push_back(why);
    for (RankSelector rank : reported_ranks()) {
      report.table.push_back(
          {rank, Cell::absent(why), Cell::absent(why), Cell::absent(why)});
      report.conditional.push_back(
          {rank, Cell::absent(why), Cell::absent(why), Cell::absent(why)});
    }
    report.winner = {Cell::absent(why), Cell::absent(why)};
    return report;
  }
  report.histogram = theory_histogram(selected, bucket, theory_field_size);
  report.table = empirical_table(selected, bucket, theory_field_size);
  report.conditional = conditional_table(selected, bucket, theory_field_size);
  report.winner = winner_odds_average(selected, bucket, theory_field_size);
  for (const auto& row : report.table) {
    if (!row.implied.present()) report.diagnostics.push_back(row.implied.note);
  }
  for (const auto& row : report.conditional) {
    if (!row.implied_given_win.present()) {
      report.diagnostics.push_back(row.implied_given_win.note);
    }
  }
  return report;
}

AnalysisReport analyze_races(const std::vector<RankedRace>& races,
                             const AnalysisOptions& options) {
  options.buckets.validate();
  if (options.theory_field_size) {
    static_cast<void>(FieldSize(*options.theory_field_size));
  }

  AnalysisReport report;
  std::vector<RankedRace> kept;
  for (const auto& race : races) {
    if (race.field_size() < options.min_field_size) {
      ++report.dropped_below_min;
      continue;
    }
    report.tied_pairs += race.tied_pairs;
    kept.push_back(race);
  }
  for (const auto& bucket : options.buckets.buckets) {
    report.buckets.push_back(
        analyze_bucket(kept, bucket, options.theory_field_size));
  }
  return report;
}

EccdfComparison eccdf_per_rank(const std::vector<RankedRace>& races,
                               RankSelector rank,
                               const std::optional<std::vector<double>>& grid) {
  std::vector<double> values;
  FieldSizeHistogram hist;
  for (const auto& race : races) {
    if (!rank.defined_for(race.field_size())) continue;
    values.push_back(race.at(rank).implied_odds);
    hist.add(race.field_size());
  }
  if (values.empty()) {
    throw std::invalid_argument("no race defines rank " + rank.label());
  }
  std::sort(values.begin(), values.end());

  std::vector<double> xs;
  if (grid) {
    xs = *grid;
    std::sort(xs.begin(), xs.end());
  } else {
    xs = values;
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  }

  EccdfComparison out;
  out.rank = rank;
  out.sample_size = values.size();
  const double total = static_cast<double>(values.size());
  for (double x : xs) {
    const auto at_or_below =
        std::upper_bound(values.begin(), values.end(), x) - values.begin();
    const auto below =
        std::lower_bound(values.begin(), values.end(), x) - values.begin();
    const double survival = (total - static_cast<double>(at_or_below)) / total;
    const double left_limit = (total - static_cast<double>(below)) / total;
    const double theory = mixture(hist, Statistic::kCcdf, rank, x);
    out.empirical.points.emplace_back(x, survival);
    out.theory.points.emplace_back(x, theory);
    out.sup_distance = std::max({out.sup_distance, std::abs(survival - theory),
                                 std::abs(left_limit - theory)});
  }
  return out;
}

}  // namespace brokenstick
