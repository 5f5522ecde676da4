#pragma once

#include <cstdint>
#include <string_view>

namespace evgraph {

// Counter-based SplitMix64: the i-th draw of a stream is a pure function of
// (key, i), so streams are reproducible across platforms and can be split
// without sharing state. Conversions to reals and bounded integers are done
// here rather than through <random> distributions, whose output is
// implementation-defined.
class CounterRng {
 public:
  static constexpr std::string_view kAlgorithm = "splitmix64-counter";

  explicit CounterRng(std::uint64_t seed) noexcept : key_(mix(seed)) {}

  // Independent child stream.
  CounterRng split(std::uint64_t stream_id) const noexcept {
    CounterRng child(0);
    child.key_ = mix(key_ ^ mix(stream_id + 0x632BE59BD9B4E019ULL));
    return child;
  }

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  // Uniform in [0, n); n > 0. Multiply-shift mapping (bias below 2^-64 * n).
  std::uint64_t below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller.
  double normal() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace evgraph
