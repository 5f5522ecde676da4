#include "evgraph/noise_synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

#include "evgraph/error.hpp"
#include "evgraph/rng.hpp"

namespace evgraph {

namespace {

void check_ratio(double ratio) {
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) {
    fail(ErrorKind::InvalidParameter, "noise ratio must be a finite value >= 0");
  }
}

std::vector<Event> clean_events(const EventStream& stream) {
  std::vector<Event> out(stream.events().begin(), stream.events().end());
  for (Event& e : out) {
    if (e.label == Label::Unknown) e.label = Label::Real;
  }
  return out;
}

}  // namespace

std::size_t noise_count(double ratio, std::size_t n_clean) {
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n_clean) + 0.5));
}

EventStream add_ba_noise(const EventStream& stream, double ratio, std::uint64_t seed) {
  check_ratio(ratio);
  const std::size_t count = noise_count(ratio, stream.size());
  if (ratio > 0.0 && stream.empty()) {
    fail(ErrorKind::InvalidInput, "cannot add BA noise to an empty stream");
  }
  std::vector<Event> events = clean_events(stream);
  CounterRng rng = CounterRng(seed).split(1);
  events.reserve(events.size() + count);
  for (std::size_t i = 0; i < count; ++i) {
    Event e;
    e.x = static_cast<std::uint16_t>(rng.below(stream.width()));
    e.y = static_cast<std::uint16_t>(rng.below(stream.height()));
    e.t = rng.uniform(stream.t_min(), stream.t_max());
    e.label = Label::Noise;
    events.push_back(e);
  }
  return EventStream(std::move(events), stream.width(), stream.height());
}

namespace {

EventStream inject_hot_pixels(const EventStream& stream, std::size_t count,
                              std::uint32_t pixel_count, std::uint64_t seed) {
  std::vector<Event> events = clean_events(stream);
  if (count == 0) return EventStream(std::move(events), stream.width(), stream.height());
  if (stream.empty()) fail(ErrorKind::InvalidInput, "cannot add hot-pixel noise to an empty stream");
  const std::uint64_t n_pixels = static_cast<std::uint64_t>(stream.width()) * stream.height();
  if (pixel_count < 1 || pixel_count > count || pixel_count > n_pixels) {
    fail(ErrorKind::InvalidParameter,
         "hot pixel count " + std::to_string(pixel_count) + " must lie in [1, " +
             std::to_string(std::min<std::uint64_t>(count, n_pixels)) + "]");
  }

  CounterRng rng = CounterRng(seed).split(2);
  std::vector<std::uint64_t> pixels;
  std::unordered_set<std::uint64_t> taken;
  while (pixels.size() < pixel_count) {
    const std::uint64_t p = rng.below(n_pixels);
    if (taken.insert(p).second) pixels.push_back(p);
  }

  // Even split; the first `count % pixel_count` pixels get one extra event.
  const double span = stream.t_max() - stream.t_min();
  events.reserve(events.size() + count);
  for (std::size_t k = 0; k < pixels.size(); ++k) {
    const std::size_t m = count / pixel_count + (k < count % pixel_count ? 1 : 0);
    const double spacing = span / static_cast<double>(m);
    const auto px = static_cast<std::uint16_t>(pixels[k] % stream.width());
    const auto py = static_cast<std::uint16_t>(pixels[k] / stream.width());
    for (std::size_t j = 0; j < m; ++j) {
      // Slot centres at (j + 1/2) * spacing, each shifted by up to 10% of the
      // spacing, so consecutive gaps stay within [0.8, 1.2] x spacing.
      const double jitter = rng.uniform(-0.1, 0.1) * spacing;
      Event e;
      e.x = px;
      e.y = py;
      e.t = stream.t_min() + (static_cast<double>(j) + 0.5) * spacing + jitter;
      e.label = Label::Noise;
      events.push_back(e);
    }
  }
  return EventStream(std::move(events), stream.width(), stream.height());
}

}  // namespace

EventStream add_hot_pixel_noise(const EventStream& stream, double ratio,
                                std::uint32_t pixel_count, std::uint64_t seed) {
  check_ratio(ratio);
  if (ratio > 0.0 && stream.empty()) {
    fail(ErrorKind::InvalidInput, "cannot add hot-pixel noise to an empty stream");
  }
  return inject_hot_pixels(stream, noise_count(ratio, stream.size()), pixel_count, seed);
}

EventStream synthesize_noise(const EventStream& clean, const NoiseSpec& spec) {
  check_ratio(spec.ba_ratio);
  check_ratio(spec.hot_ratio);
  if (spec.hot_ratio > 0.0 && clean.empty()) {
    fail(ErrorKind::InvalidInput, "cannot add hot-pixel noise to an empty stream");
  }
  const EventStream with_ba = add_ba_noise(clean, spec.ba_ratio, spec.seed);
  // Hot-pixel budget is relative to the clean count, not the BA-augmented one.
  return inject_hot_pixels(with_ba, noise_count(spec.hot_ratio, clean.size()),
                           spec.hot_pixel_count, spec.seed);
}

}  // namespace evgraph
