#include "evgraph/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "evgraph/error.hpp"
#include "evgraph/rng.hpp"

namespace evgraph {

EventStream moving_shape_stream(const MovingShapeParams& p) {
  if (p.width == 0 || p.height == 0 || !(p.duration > 0.0)) {
    fail(ErrorKind::InvalidParameter, "scene needs a positive sensor size and duration");
  }
  CounterRng rng(p.seed);
  std::vector<Event> events;
  events.reserve(p.n_events);
  const double max_x = static_cast<double>(p.width - 1);
  const double max_y = static_cast<double>(p.height - 1);
  while (events.size() < p.n_events) {
    const double t = rng.uniform(0.0, p.duration);
    const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = p.radius + p.jitter * rng.normal();
    const double x = std::round(p.x0 + p.vx * t + r * std::cos(a));
    const double y = std::round(p.y0 + p.vy * t + r * std::sin(a));
    if (x < 0.0 || y < 0.0 || x > max_x || y > max_y) continue;
    events.push_back({static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), t, Label::Real});
  }
  return EventStream(std::move(events), p.width, p.height);
}

}  // namespace evgraph
