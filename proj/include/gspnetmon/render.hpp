#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gspnetmon/graph.hpp"

namespace gspnetmon {

/// Min-max scaling to [0, 1]; a constant signal maps to all zeros.
std::vector<double> normalize_min_max(const Vector& x);

/// Dark blue (#00008B) at 0 through blue, cyan and yellow to red (#FF0000) at 1.
std::array<std::uint8_t, 3> colormap(double t);
/// "#RRGGBB" for colormap(t).
std::string colormap_hex(double t);

enum class RenderFormat { Dot, Svg, Json };
RenderFormat render_format_from_string(const std::string& name);

/// Undirected DOT graph, one node statement per vertex in id order with its
/// label, value and fillcolor.
std::string render_dot(const LayerGraph& g, const Vector& x, const std::string& name = "G");

/// Standalone SVG: spine, leaf, host and monitor rows, vertices colored by x.
std::string render_svg(const LayerGraph& g, const Vector& x);

/// {"nodes":[{"id","label","role","value","color"}],"edges":[[u,v],...]}
std::string render_json(const LayerGraph& g, const Vector& x);

std::string render(const LayerGraph& g, const Vector& x, RenderFormat format);

}  // namespace gspnetmon
