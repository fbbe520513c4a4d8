#include "brokenstick/rng.h"

#include <cmath>
#include <numbers>

namespace brokenstick {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

constexpr double kTwoToMinus53 = 0x1.0p-53;

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed,
                                       std::uint64_t stream) {
  // Mix the stream index through its own SplitMix64 step so that nearby
  // (seed, stream) pairs land on unrelated states.
  SplitMix64 stream_mix(stream);
  SplitMix64 init(seed ^ stream_mix.next());
  for (auto& word : s_) word = init.next();
}

std::uint64_t Xoshiro256StarStar::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256StarStar::uniform() {
  return static_cast<double>(next() >> 11) * kTwoToMinus53;
}

double Xoshiro256StarStar::uniform_open_closed() {
  return static_cast<double>((next() >> 11) + 1) * kTwoToMinus53;
}

double Xoshiro256StarStar::exponential() {
  return -std::log(uniform_open_closed());
}

double Xoshiro256StarStar::normal() {
  const double radius = std::sqrt(2.0 * exponential());
  const double angle = 2.0 * std::numbers::pi * uniform();
  return radius * std::cos(angle);
}

std::uint64_t Xoshiro256StarStar::below(std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace brokenstick
