#include "evgraph/plot.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "evgraph/error.hpp"

namespace evgraph {

Projection parse_projection(const std::string& s) {
  if (s == "xy") return Projection::XY;
  if (s == "xt") return Projection::XT;
  if (s == "yt") return Projection::YT;
  fail(ErrorKind::Parse, "unknown projection '" + s + "' (expected xy, xt or yt)");
}

namespace {

struct ClassStyle {
  const char* id;
  const char* color;
  const char* legend;
};

constexpr std::array<ClassStyle, 4> kClasses = {{
    {"tp", "red", "detected real (TP)"},
    {"fp", "orange", "undetected real (FP)"},
    {"tn", "blue", "detected noise (TN)"},
    {"fn", "green", "undetected noise (FN)"},
}};

std::size_t class_of(std::uint8_t pred, Label truth) {
  if (truth == Label::Real) return pred ? 0 : 1;
  return pred ? 3 : 2;
}

}  // namespace

void write_svg_scatter(const EventStream& events, std::span<const std::uint8_t> pred,
                       std::span<const Label> truth, Projection projection, std::ostream& out) {
  if (pred.size() != events.size() || truth.size() != events.size()) {
    fail(ErrorKind::InvalidInput, "plot inputs have different lengths (events " +
                                      std::to_string(events.size()) + ", predictions " +
                                      std::to_string(pred.size()) + ", truth " +
                                      std::to_string(truth.size()) + ")");
  }
  for (Label l : truth) {
    if (l == Label::Unknown) fail(ErrorKind::InvalidInput, "plot needs fully labelled truth");
  }
  constexpr double kW = 640, kH = 480, kMargin = 60;
  const auto coord = [&](const Event& e) -> std::pair<double, double> {
    switch (projection) {
      case Projection::XY:
        return {e.x, e.y};
      case Projection::XT:
        return {e.t, e.x};
      case Projection::YT:
        return {e.t, e.y};
    }
    return {0, 0};
  };
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!events.empty()) {
    xmin = ymin = std::numeric_limits<double>::infinity();
    xmax = ymax = -std::numeric_limits<double>::infinity();
    for (const Event& e : events.events()) {
      const auto [u, v] = coord(e);
      xmin = std::min(xmin, u);
      xmax = std::max(xmax, u);
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
  }
  const auto sx = [&](double u) { return kMargin + (u - xmin) / (xmax - xmin) * (kW - 2 * kMargin); };
  const auto sy = [&](double v) { return kH - kMargin - (v - ymin) / (ymax - ymin) * (kH - 2 * kMargin); };
  const char* xlabel = projection == Projection::XY ? "x [px]" : "t [s]";
  const char* ylabel = projection == Projection::YT ? "y [px]" : (projection == Projection::XY ? "y [px]" : "x [px]");

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n"
      << "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\"" << kW - kMargin
      << "\" y2=\"" << kH - kMargin << "\"/>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
      << kH - kMargin << "\"/>\n"
      << "</g>\n"
      << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 20 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n"
      << "<text x=\"20\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << kH / 2 << ")\">" << ylabel << "</text>\n";

  std::array<std::vector<std::size_t>, 4> members;
  for (std::size_t i = 0; i < events.size(); ++i) members[class_of(pred[i], truth[i])].push_back(i);
  for (std::size_t c = 0; c < kClasses.size(); ++c) {
    out << "<g id=\"" << kClasses[c].id << "\" fill=\"" << kClasses[c].color << "\">\n";
    for (std::size_t i : members[c]) {
      const auto [u, v] = coord(events[i]);
      out << "<circle cx=\"" << sx(u) << "\" cy=\"" << sy(v) << "\" r=\"1.5\"/>\n";
    }
    out << "</g>\n";
  }
  out << "<g id=\"legend\" font-size=\"12\">\n";
  for (std::size_t c = 0; c < kClasses.size(); ++c) {
    const double y = 20 + 16 * static_cast<double>(c);
    out << "<circle cx=\"" << kW - 170 << "\" cy=\"" << y - 4 << "\" r=\"4\" fill=\""
        << kClasses[c].color << "\"/>\n"
        << "<text x=\"" << kW - 160 << "\" y=\"" << y << "\">" << kClasses[c].legend << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

}  // namespace evgraph
