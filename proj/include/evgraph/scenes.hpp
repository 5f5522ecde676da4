#pragma once

#include <cstddef>
#include <cstdint>

#include "evgraph/event_model.hpp"

namespace evgraph {

// Clean synthetic stream: events on the outline of a ring translating across
// the sensor at constant velocity, labelled real.
struct MovingShapeParams {
  std::size_t n_events = 5000;
  std::uint32_t width = 128;
  std::uint32_t height = 128;
  double duration = 1.0;  // seconds
  double radius = 6.0;    // pixels
  double x0 = 24.0, y0 = 40.0;  // centre at t = 0
  double vx = 60.0, vy = 40.0;  // pixels per second
  double jitter = 0.35;         // gaussian edge spread, pixels
  std::uint64_t seed = 1;
};

EventStream moving_shape_stream(const MovingShapeParams& p);

}  // namespace evgraph
