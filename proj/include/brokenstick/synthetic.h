#ifndef BROKENSTICK_SYNTHETIC_H_
#define BROKENSTICK_SYNTHETIC_H_

#include <cstdint>
#include <variant>
#include <vector>

#include "brokenstick/orderstats.h"
#include "brokenstick/race_data.h"

namespace brokenstick {

// Synthetic betting market built on the broken stick.
//
// Each race's true winning probabilities are a uniform-cut division of the
// unit interval, and the winner is drawn from them. The quoted implied odds
// are the true probabilities times exp(odds_noise * Z), Z standard normal,
// renormalized to sum to 1; odds_noise = 0 is a perfectly efficient market.
// The noise model is a knob for ranking errors, not a fitted quantity.
struct SyntheticDatasetConfig {
  std::uint64_t race_count = 1;
  // Either a histogram sampled per race, or an explicit n for each race
  // (cycled when shorter than race_count).
  std::variant<FieldSizeHistogram, std::vector<int>> field_size_law;
  std::uint64_t seed = 0;
  double odds_noise = 0.0;

  void validate() const;
};

// Throws std::invalid_argument for an invalid config, including any field
// size below 2 or an empty field-size law.
std::vector<RaceRecord> generate_synthetic_dataset(
    const SyntheticDatasetConfig& config);

}  // namespace brokenstick

#endif  // BROKENSTICK_SYNTHETIC_H_
