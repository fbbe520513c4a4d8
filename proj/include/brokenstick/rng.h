#ifndef BROKENSTICK_RNG_H_
#define BROKENSTICK_RNG_H_

#include <array>
#include <cstdint>

namespace brokenstick {

// SplitMix64 (Steele, Lea, Flood). Used to expand seeds.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

// xoshiro256** 1.0 (Blackman, Vigna). Every stream is seeded from
// (seed, stream index) through SplitMix64, so chunked simulations reproduce
// regardless of how chunks are distributed over threads.
//
// Variates are produced by hand-written transforms instead of <random>
// distributions, whose output is implementation-defined.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next(); }

  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_open_closed();
  // Unit-rate exponential, -log(U) with U on (0, 1]. Can return exactly 0.
  double exponential();
  // Standard normal by the Box-Muller transform (one output per call).
  double normal();
  // Uniform integer on [0, bound), bound > 0, by Lemire's rejection method.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::array<std::uint64_t, 4> s_;
};

using Rng = Xoshiro256StarStar;

}  // namespace brokenstick

#endif  // BROKENSTICK_RNG_H_
