#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "evgraph/detect.hpp"
#include "evgraph/event_model.hpp"

namespace evgraph {

enum class Projection { XY, XT, YT };

Projection parse_projection(const std::string& s);

// SVG 1.1 scatter of one 2-D projection. Classes, one <g> each:
// tp red (real kept), fp orange (real removed), tn blue (noise removed),
// fn green (noise kept).
void write_svg_scatter(const EventStream& events, std::span<const std::uint8_t> pred,
                       std::span<const Label> truth, Projection projection, std::ostream& out);

}  // namespace evgraph
