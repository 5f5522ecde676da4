#pragma once

// Synthetic background-activity (BA) and hot-pixel noise with ground truth.
// Noise counts are relative to the clean event count and exact
// (round half up), never sampled.

#include <cstddef>
#include <cstdint>

#include "evgraph/event_model.hpp"

namespace evgraph {

struct NoiseSpec {
  double ba_ratio = 0.0;
  double hot_ratio = 0.0;
  std::uint32_t hot_pixel_count = 4;
  std::uint64_t seed = 0;
};

// round(ratio * n) with halves rounded up.
std::size_t noise_count(double ratio, std::size_t n_clean);

// Uniform (x, y) over the sensor and t over [t_min, t_max].
EventStream add_ba_noise(const EventStream& stream, double ratio, std::uint64_t seed);

// `pixel_count` distinct pixels, each firing at regularly spaced timestamps
// across [t_min, t_max] with +-10% uniform jitter of the spacing.
EventStream add_hot_pixel_noise(const EventStream& stream, double ratio,
                                std::uint32_t pixel_count, std::uint64_t seed);

// BA then hot-pixel injection, both relative to the clean count.
EventStream synthesize_noise(const EventStream& clean, const NoiseSpec& spec);

}  // namespace evgraph
