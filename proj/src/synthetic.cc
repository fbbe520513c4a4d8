#include "brokenstick/synthetic.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "brokenstick/montecarlo.h"
#include "brokenstick/rng.h"

namespace brokenstick {

void SyntheticDatasetConfig::validate() const {
  if (race_count < 1) throw std::invalid_argument("race_count must be >= 1");
  if (!(odds_noise >= 0.0) || !std::isfinite(odds_noise)) {
    throw std::invalid_argument("odds_noise must be a finite value >= 0");
  }
  if (const auto* hist = std::get_if<FieldSizeHistogram>(&field_size_law)) {
    if (hist->empty()) {
      throw std::invalid_argument("field-size law has empty support");
    }
    if (hist->min_field_size() < 2) {
      throw std::invalid_argument("synthetic races need n >= 2, law has n=" +
                                  std::to_string(hist->min_field_size()));
    }
  } else {
    const auto& sizes = std::get<std::vector<int>>(field_size_law);
    if (sizes.empty()) {
      throw std::invalid_argument("field-size law has empty support");
    }
    for (int n : sizes) {
      if (n < 2) {
        throw std::invalid_argument("synthetic races need n >= 2, got n=" +
                                    std::to_string(n));
      }
    }
  }
}

namespace {

int draw_field_size(const SyntheticDatasetConfig& config, std::uint64_t race,
                    Rng& rng) {
  if (const auto* sizes = std::get_if<std::vector<int>>(&config.field_size_law)) {
    return (*sizes)[race % sizes->size()];
  }
  const auto& hist = std::get<FieldSizeHistogram>(config.field_size_law);
  std::uint64_t target = rng.below(hist.total());
  for (const auto& [n, count] : hist.counts()) {
    if (target < count) return n;
    target -= count;
  }
  return hist.max_field_size();
}

std::string numbered(char prefix, std::uint64_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*llu", prefix, width,
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace

std::vector<RaceRecord> generate_synthetic_dataset(
    const SyntheticDatasetConfig& config) {
  config.validate();
  Rng rng(config.seed);
  std::vector<RaceRecord> races;
  races.reserve(config.race_count);

  for (std::uint64_t r = 0; r < config.race_count; ++r) {
    const FieldSize n(draw_field_size(config, r, rng));
    // sample_race orders the true probabilities descending and draws the
    // winner from them.
    const RaceDraw draw = sample_race(n, rng);
    const auto& truth = draw.division.segments;

    std::vector<double> quoted(truth);
    if (config.odds_noise > 0.0) {
      double total = 0.0;
      for (double& q : quoted) {
        q *= std::exp(config.odds_noise * rng.normal());
        total += q;
      }
      for (double& q : quoted) q /= total;
    }

    // Shuffle so that file order says nothing about rank.
    std::vector<int> order(n.value());
    for (int i = 0; i < n.value(); ++i) order[i] = i;
    for (int i = n.value() - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }

    RaceRecord record;
    record.race_id = numbered('R', r + 1, 6);
    for (int slot = 0; slot < n.value(); ++slot) {
      const int i = order[slot];
      record.entries.push_back({numbered('H', static_cast<std::uint64_t>(slot) + 1, 2),
                                1.0 / quoted[i],
                                i + 1 == draw.winner_rank.value()});
    }
    races.push_back(std::move(record));
  }
  return races;
}

}  // namespace brokenstick
