#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "evgraph/error.hpp"
#include "evgraph/event_model.hpp"

using namespace evgraph;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "evgraph_test_event_model";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

EventStream random_stream(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_int_distribution<int> px(0, 345), py(0, 259), lab(0, 1);
  std::uniform_real_distribution<double> t(0.0, 2.0);
  std::vector<Event> ev(n);
  for (auto& e : ev) {
    e = {static_cast<std::uint16_t>(px(g)), static_cast<std::uint16_t>(py(g)), t(g),
         lab(g) ? Label::Real : Label::Noise};
  }
  return EventStream(std::move(ev), 346, 260);
}

}  // namespace

TEST_CASE("stream sorts stably by time and infers the sensor size") {
  EventStream s({{5, 1, 0.3, Label::Real}, {2, 7, 0.1, Label::Noise}, {9, 9, 0.3, Label::Noise}},
                0, 0);
  REQUIRE(s.size() == 3);
  CHECK(s[0].x == 2);
  CHECK(s[1].x == 5);  // equal timestamps keep input order
  CHECK(s[2].x == 9);
  CHECK(s.width() == 10);
  CHECK(s.height() == 10);
  CHECK(s.t_min() == 0.1);
  CHECK(s.t_max() == 0.3);
  CHECK(s.has_labels());
}

TEST_CASE("events outside the declared sensor are rejected") {
  CHECK_THROWS_AS(EventStream({{10, 0, 0.0, Label::Real}}, 10, 10), Error);
}

TEST_CASE("csv and binary round-trip 1000 random events exactly") {
  const EventStream s = random_stream(1000, 42);
  for (const char* name : {"rt.csv", "rt.bin"}) {
    const fs::path p = scratch(name);
    save_events(s, p, format_from_path(p));
    CHECK(load_events(p, format_from_path(p)) == s);
  }
}

TEST_CASE("csv parse errors carry the line number") {
  const fs::path p = scratch("bad.csv");
  write(p, "x,y,t,label\n1,2,0.5,1\n3,oops,0.6,0\n");
  try {
    load_events(p, FileFormat::Csv);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
}

TEST_CASE("csv without labels loads as unknown; time units convert to seconds") {
  const fs::path p = scratch("nolabel.csv");
  write(p, "x,y,t\n1,2,1500\n0,0,500\n");
  const EventStream s = load_events(p, FileFormat::Csv, TimeUnit::Microseconds);
  REQUIRE(s.size() == 2);
  CHECK(s[0].t == doctest::Approx(0.0005));
  CHECK(s[1].t == doctest::Approx(0.0015));
  CHECK(s[0].label == Label::Unknown);
  CHECK_FALSE(s.has_labels());
}

TEST_CASE("truncated binary file is a parse error") {
  const fs::path p = scratch("trunc.bin");
  save_events(random_stream(10, 1), p, FileFormat::Binary);
  fs::resize_file(p, fs::file_size(p) - 5);
  CHECK_THROWS_AS(load_events(p, FileFormat::Binary), Error);
}

TEST_CASE("scale_time multiplies t by beta and scaling composes") {
  const EventStream s({{1, 2, 0.5, Label::Real}, {3, 4, 1.0, Label::Real}}, 8, 8);
  const ScaledEvents a = scale_time(s, 50.0);
  CHECK(a(0, 0) == 1.0);
  CHECK(a(0, 1) == 2.0);
  CHECK(a(0, 2) == 25.0);
  CHECK(a(1, 2) == 50.0);
  CHECK(squared_distance(a, 0, 1) == doctest::Approx(4 + 4 + 625));
  const ScaledEvents b = scale_time(a, 2.0);
  CHECK(b(1, 2) == 100.0);
  CHECK(b.beta() == 100.0);
  CHECK_THROWS_AS(scale_time(s, 0.0), Error);
}

TEST_CASE("beta 2 applied twice equals beta 4 once; beta 1 is the identity") {
  const EventStream s = random_stream(50, 3);
  CHECK(scale_time(scale_time(s, 2.0), 2.0).coords().size() == 150);
  const auto twice = scale_time(scale_time(s, 2.0), 2.0);
  const auto once = scale_time(s, 4.0);
  CHECK(twice == once);
  const auto id = scale_time(s, 1.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(id(i, 0) == s[i].x);
    CHECK(id(i, 2) == s[i].t);
  }
  const EventStream one({{0, 0, 0.1, Label::Real}}, 1, 1);
  CHECK(scale_time(one, 50.0)(0, 2) == doctest::Approx(5.0));
}
