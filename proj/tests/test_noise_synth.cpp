#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "evgraph/error.hpp"
#include "evgraph/noise_synth.hpp"
#include "evgraph/scenes.hpp"

using namespace evgraph;

namespace {

EventStream clean(std::size_t n) {
  std::vector<Event> ev;
  for (std::size_t i = 0; i < n; ++i) {
    ev.push_back({static_cast<std::uint16_t>(i % 64), static_cast<std::uint16_t>(i % 48),
                  static_cast<double>(i) / static_cast<double>(n), Label::Unknown});
  }
  return EventStream(std::move(ev), 64, 48);
}

std::size_t count_label(const EventStream& s, Label l) {
  return std::count_if(s.events().begin(), s.events().end(),
                       [&](const Event& e) { return e.label == l; });
}

}  // namespace

TEST_CASE("noise counts round half up") {
  CHECK(noise_count(0.10, 1000) == 100);
  CHECK(noise_count(0.02, 1000) == 20);
  CHECK(noise_count(0.5, 3) == 2);   // 1.5 -> 2
  CHECK(noise_count(0.25, 2) == 1);  // 0.5 -> 1
  CHECK(noise_count(0.0, 1000) == 0);
}

TEST_CASE("zero ratio passes events through, labelled real") {
  const EventStream s = clean(100);
  const EventStream out = add_ba_noise(s, 0.0, 9);
  REQUIRE(out.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(out[i].x == s[i].x);
    CHECK(out[i].t == s[i].t);
    CHECK(out[i].label == Label::Real);
  }
}

TEST_CASE("BA noise adds exactly round(ratio N) uniform events inside the stream bounds") {
  const EventStream s = clean(1000);
  const EventStream out = add_ba_noise(s, 0.10, 3);
  CHECK(out.size() == 1100);
  CHECK(count_label(out, Label::Noise) == 100);
  CHECK(count_label(out, Label::Real) == 1000);
  for (const Event& e : out.events()) {
    CHECK(e.x < 64);
    CHECK(e.y < 48);
    CHECK(e.t >= s.t_min());
    CHECK(e.t <= s.t_max());
  }
  CHECK(std::is_sorted(out.events().begin(), out.events().end(),
                       [](const Event& a, const Event& b) { return a.t < b.t; }));
}

TEST_CASE("same seed is bitwise identical, different seed differs") {
  const EventStream s = clean(500);
  const NoiseSpec a{0.08, 0.04, 4, 17};
  CHECK(synthesize_noise(s, a) == synthesize_noise(s, a));
  NoiseSpec b = a;
  b.seed = 18;
  CHECK_FALSE(synthesize_noise(s, a) == synthesize_noise(s, b));
}

TEST_CASE("hot pixels: 20 events on 4 pixels, 5 each, jittered-regular gaps") {
  const EventStream s = clean(1000);
  const EventStream out = add_hot_pixel_noise(s, 0.02, 4, 5);
  CHECK(out.size() == 1020);
  std::map<std::pair<int, int>, std::vector<double>> per_pixel;
  for (const Event& e : out.events()) {
    if (e.label == Label::Noise) per_pixel[{e.x, e.y}].push_back(e.t);
  }
  REQUIRE(per_pixel.size() == 4);
  const double spacing = (s.t_max() - s.t_min()) / 5.0;
  for (auto& [px, ts] : per_pixel) {
    CHECK(ts.size() == 5);
    CHECK(std::is_sorted(ts.begin(), ts.end()));
    for (std::size_t i = 1; i < ts.size(); ++i) {
      const double gap = ts[i] - ts[i - 1];
      CHECK(gap >= 0.8 * spacing - 1e-12);
      CHECK(gap <= 1.2 * spacing + 1e-12);
    }
    CHECK(ts.front() >= s.t_min());
    CHECK(ts.back() <= s.t_max());
  }
}

TEST_CASE("single hot pixel puts all hot noise on one coordinate") {
  const EventStream out = add_hot_pixel_noise(clean(300), 0.03, 1, 2);
  std::set<std::pair<int, int>> px;
  for (const Event& e : out.events()) {
    if (e.label == Label::Noise) px.insert({e.x, e.y});
  }
  CHECK(px.size() == 1);
}

TEST_CASE("hot-pixel budget and ratio validation") {
  CHECK_THROWS_AS(add_hot_pixel_noise(clean(100), 0.02, 3, 1), Error);  // 2 events, 3 pixels
  CHECK_THROWS_AS(add_hot_pixel_noise(clean(100), 0.02, 0, 1), Error);
  CHECK_THROWS_AS(add_ba_noise(clean(100), -0.1, 1), Error);
  CHECK_THROWS_AS(add_ba_noise(EventStream(), 0.1, 1), Error);
}

TEST_CASE("12% total noise relative to the clean count; originals untouched") {
  const EventStream s = clean(1000);
  const EventStream out = synthesize_noise(s, {0.10, 0.02, 4, 1});
  CHECK(out.size() == 1120);
  CHECK(count_label(out, Label::Noise) == 120);
  std::vector<Event> real;
  for (const Event& e : out.events()) {
    if (e.label == Label::Real) real.push_back({e.x, e.y, e.t, Label::Unknown});
  }
  CHECK(std::vector<Event>(s.events().begin(), s.events().end()) == real);
}

TEST_CASE("moving shape scene is deterministic and sized as asked") {
  MovingShapeParams p;
  p.n_events = 800;
  const EventStream a = moving_shape_stream(p);
  CHECK(a.size() == 800);
  CHECK(count_label(a, Label::Real) == 800);
  CHECK(a == moving_shape_stream(p));
}
