#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "evgraph/error.hpp"
#include "evgraph/plot.hpp"

using namespace evgraph;

namespace {

EventStream mixed() {
  std::vector<Event> ev;
  for (int i = 0; i < 8; ++i) {
    ev.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(7 - i), 0.1 * i,
                  i < 5 ? Label::Real : Label::Noise});
  }
  return EventStream(std::move(ev), 8, 8);
}

std::vector<Label> truth() {
  std::vector<Label> t;
  for (const Event& e : mixed().events()) t.push_back(e.label);
  return t;
}

std::string render(const LabelVector& pred, Projection p = Projection::XY) {
  std::ostringstream out;
  write_svg_scatter(mixed(), pred, truth(), p, out);
  return out.str();
}

// Number of <circle> elements inside the group with the given id.
std::size_t circles_in(const std::string& svg, const std::string& id) {
  const auto start = svg.find("<g id=\"" + id + "\"");
  REQUIRE(start != std::string::npos);
  const auto end = svg.find("</g>", start);
  std::size_t n = 0;
  for (auto pos = svg.find("<circle", start); pos != std::string::npos && pos < end;
       pos = svg.find("<circle", pos + 1)) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("perfect prediction shows only red and blue points") {
  const std::string svg = render({1, 1, 1, 1, 1, 0, 0, 0});
  CHECK(circles_in(svg, "tp") == 5);
  CHECK(circles_in(svg, "tn") == 3);
  CHECK(circles_in(svg, "fp") == 0);
  CHECK(circles_in(svg, "fn") == 0);
}

TEST_CASE("all-real prediction on mixed truth has green but no blue") {
  const std::string svg = render(LabelVector(8, 1));
  CHECK(circles_in(svg, "tn") == 0);
  CHECK(circles_in(svg, "fn") == 3);
}

TEST_CASE("svg structure: one group per class, balanced tags, legend and axis labels") {
  for (Projection p : {Projection::XY, Projection::XT, Projection::YT}) {
    const std::string svg = render({0, 1, 1, 0, 1, 1, 0, 0}, p);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("version=\"1.1\"") != std::string::npos);
    for (const char* id : {"tp", "fp", "tn", "fn"}) {
      const std::string tag = std::string("<g id=\"") + id + "\"";
      const auto first = svg.find(tag);
      CHECK(first != std::string::npos);
      CHECK(svg.find(tag, first + 1) == std::string::npos);
    }
    // Every element that opens is either self-closing or closed later.
    const std::regex open("<([a-zA-Z]+)[^>]*[^/]>"), self("<[a-zA-Z]+[^>]*/>"),
        close("</([a-zA-Z]+)>");
    const auto count = [&](const std::regex& re) {
      return std::distance(std::sregex_iterator(svg.begin(), svg.end(), re),
                           std::sregex_iterator());
    };
    CHECK(count(open) == count(close));
    CHECK(count(self) > 0);
    CHECK(svg.find("legend") != std::string::npos);
  }
  CHECK(render(LabelVector(8, 1), Projection::XT).find(">t") != std::string::npos);
}

TEST_CASE("mismatched lengths and unknown projections are rejected") {
  std::ostringstream out;
  CHECK_THROWS_AS(write_svg_scatter(mixed(), LabelVector(3, 1), truth(), Projection::XY, out),
                  Error);
  CHECK(parse_projection("yt") == Projection::YT);
  CHECK_THROWS_AS(parse_projection("zz"), Error);
}
