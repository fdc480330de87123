#include "gspnetmon/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gspnetmon/error.hpp"
#include "gspnetmon/io_util.hpp"

namespace gspnetmon {

namespace {

void require_signal(const LayerGraph& g, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != g.size()) {
        throw DimensionError("signal has " + std::to_string(x.size()) + " values, graph has " +
                             std::to_string(g.size()) + " vertices");
    }
}

std::string escape_dot(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

int row_of(Role role) {
    switch (role) {
        case Role::Monitor: return 0;
        case Role::SpineSwitch: return 1;
        case Role::LeafSwitch: return 2;
        case Role::Host: return 3;
    }
    return 3;
}

}  // namespace

std::vector<double> normalize_min_max(const Vector& x) {
    std::vector<double> out(static_cast<std::size_t>(x.size()), 0.0);
    if (x.size() == 0) return out;
    const double lo = x.minCoeff();
    const double span = x.maxCoeff() - lo;
    if (!(span > 0.0)) return out;
    for (Eigen::Index i = 0; i < x.size(); ++i) out[static_cast<std::size_t>(i)] = (x(i) - lo) / span;
    return out;
}

std::array<std::uint8_t, 3> colormap(double t) {
    struct Stop {
        double at;
        double r, g, b;
    };
    static constexpr Stop kStops[] = {{0.0, 0, 0, 139},   {0.25, 0, 0, 255}, {0.5, 0, 255, 255},
                                      {0.75, 255, 255, 0}, {1.0, 255, 0, 0}};
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    std::size_t i = 0;
    while (i + 2 < std::size(kStops) && t > kStops[i + 1].at) ++i;
    const auto& a = kStops[i];
    const auto& b = kStops[i + 1];
    const double w = (t - a.at) / (b.at - a.at);
    auto channel = [w](double from, double to) {
        return static_cast<std::uint8_t>(std::lround(from + w * (to - from)));
    };
    return {channel(a.r, b.r), channel(a.g, b.g), channel(a.b, b.b)};
}

std::string colormap_hex(double t) {
    const auto c = colormap(t);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c[0], c[1], c[2]);
    return buf;
}

RenderFormat render_format_from_string(const std::string& name) {
    if (name == "dot") return RenderFormat::Dot;
    if (name == "svg") return RenderFormat::Svg;
    if (name == "json") return RenderFormat::Json;
    throw ParameterError("unknown format '" + name + "' (expected dot, svg or json)");
}

std::string render_dot(const LayerGraph& g, const Vector& x, const std::string& name) {
    require_signal(g, x);
    const auto t = normalize_min_max(x);
    std::ostringstream out;
    out << "graph \"" << escape_dot(name) << "\" {\n";
    out << "  node [style=filled, shape=circle, fontcolor=white];\n";
    for (std::size_t v = 0; v < g.size(); ++v) {
        out << "  n" << v << " [label=\"" << escape_dot(g.label(v)) << "\", role=\""
            << to_string(g.role(v)) << "\", value=\"" << format_real(x(static_cast<Eigen::Index>(v)))
            << "\", fillcolor=\"" << colormap_hex(t[v]) << "\"];\n";
    }
    for (const auto& e : g.edges()) {
        out << "  n" << e.u << " -- n" << e.v;
        if (e.weight != 1.0) out << " [weight=\"" << format_real(e.weight) << "\"]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string render_svg(const LayerGraph& g, const Vector& x) {
    require_signal(g, x);
    const auto t = normalize_min_max(x);
    constexpr double kSpacing = 28.0;
    constexpr double kRowHeight = 120.0;
    constexpr double kMargin = 30.0;
    constexpr double kRadius = 9.0;

    std::map<int, std::vector<std::size_t>> rows;
    for (std::size_t v = 0; v < g.size(); ++v) rows[row_of(g.role(v))].push_back(v);
    std::size_t widest = 1;
    for (const auto& [row, members] : rows) widest = std::max(widest, members.size());
    const double width = 2 * kMargin + kSpacing * static_cast<double>(widest - 1);
    const double height = 2 * kMargin + kRowHeight * static_cast<double>(rows.size() - (rows.empty() ? 0 : 1));

    std::vector<std::pair<double, double>> pos(g.size());
    double y = kMargin;
    for (const auto& [row, members] : rows) {
        const double offset = (width - kSpacing * static_cast<double>(members.size() - 1)) / 2.0;
        for (std::size_t i = 0; i < members.size(); ++i) {
            pos[members[i]] = {offset + kSpacing * static_cast<double>(i), y};
        }
        y += kRowHeight;
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_real(width)
        << "\" height=\"" << format_real(height) << "\">\n";
    out << "  <g stroke=\"#999999\" stroke-width=\"1\">\n";
    for (const auto& e : g.edges()) {
        out << "    <line x1=\"" << format_real(pos[e.u].first) << "\" y1=\"" << format_real(pos[e.u].second)
            << "\" x2=\"" << format_real(pos[e.v].first) << "\" y2=\"" << format_real(pos[e.v].second)
            << "\"/>\n";
    }
    out << "  </g>\n";
    for (std::size_t v = 0; v < g.size(); ++v) {
        out << "  <circle cx=\"" << format_real(pos[v].first) << "\" cy=\"" << format_real(pos[v].second)
            << "\" r=\"" << format_real(kRadius) << "\" fill=\"" << colormap_hex(t[v])
            << "\"><title>" << escape_xml(g.label(v)) << " "
            << format_real(x(static_cast<Eigen::Index>(v))) << "</title></circle>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_json(const LayerGraph& g, const Vector& x) {
    require_signal(g, x);
    const auto t = normalize_min_max(x);
    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    for (std::size_t v = 0; v < g.size(); ++v) {
        j["nodes"].push_back(nlohmann::ordered_json{{"id", v},
                                                    {"label", g.label(v)},
                                                    {"role", std::string(to_string(g.role(v)))},
                                                    {"value", x(static_cast<Eigen::Index>(v))},
                                                    {"color", colormap_hex(t[v])}});
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges()) j["edges"].push_back({e.u, e.v});
    return j.dump(2) + "\n";
}

std::string render(const LayerGraph& g, const Vector& x, RenderFormat format) {
    switch (format) {
        case RenderFormat::Dot: return render_dot(g, x);
        case RenderFormat::Svg: return render_svg(g, x);
        case RenderFormat::Json: return render_json(g, x);
    }
    return {};
}

}  // namespace gspnetmon
