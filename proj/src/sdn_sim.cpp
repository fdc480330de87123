#include "gspnetmon/sdn_sim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gspnetmon/error.hpp"
#include "gspnetmon/io_util.hpp"

namespace gspnetmon {

using nlohmann::json;

LayerGraph gen_leaf_spine(const LeafSpineSpec& spec) {
    if (spec.spines == 0 || spec.leaves == 0 || spec.hosts_per_leaf == 0) {
        throw ParameterError("leaf-spine spec needs at least one spine, leaf and host per leaf");
    }
    std::vector<NodeInfo> nodes;
    for (std::size_t i = 0; i < spec.spines; ++i) {
        nodes.push_back({"s" + std::to_string(i), Role::SpineSwitch});
    }
    for (std::size_t i = 0; i < spec.leaves; ++i) {
        nodes.push_back({"l" + std::to_string(i), Role::LeafSwitch});
    }
    const auto host_count = spec.leaves * spec.hosts_per_leaf;
    for (std::size_t i = 0; i < host_count; ++i) {
        nodes.push_back({"h" + std::to_string(i), Role::Host});
    }
    std::vector<NodePair> edges;
    const auto first_leaf = spec.spines;
    const auto first_host = spec.spines + spec.leaves;
    for (std::size_t s = 0; s < spec.spines; ++s) {
        for (std::size_t l = 0; l < spec.leaves; ++l) edges.emplace_back(s, first_leaf + l);
    }
    for (std::size_t h = 0; h < host_count; ++h) {
        edges.emplace_back(first_leaf + h / spec.hosts_per_leaf, first_host + h);
    }
    return build_layer(1, std::move(nodes), edges);
}

bool TrafficScenario::has_event(std::int64_t t) const {
    return std::any_of(events.begin(), events.end(),
                       [t](const CongestionEvent& e) { return e.start <= t && t < e.end; });
}

std::vector<std::int64_t> TrafficScenario::quiet_intervals() const {
    std::vector<std::int64_t> out;
    for (std::int64_t t = 0; t < intervals; ++t) {
        if (!has_event(t)) out.push_back(t);
    }
    return out;
}

void validate_scenario(const TrafficScenario& s, const LayerGraph& g1) {
    if (s.intervals < 1) throw ParameterError("scenario needs at least one interval");
    if (!std::isfinite(s.mu) || !std::isfinite(s.sigma) || s.sigma < 0.0) {
        throw ParameterError("baseline needs finite mu and sigma >= 0");
    }
    for (const auto& e : s.events) {
        if (e.start < 0 || e.end <= e.start || e.end > s.intervals) {
            throw ParameterError("event window [" + std::to_string(e.start) + ", " +
                                 std::to_string(e.end) + ") outside [0, " +
                                 std::to_string(s.intervals) + ")");
        }
        if (e.target_host >= g1.size()) {
            throw ParameterError("event target " + std::to_string(e.target_host) +
                                 " is not a node of the topology");
        }
        if (g1.role(e.target_host) != Role::Host) {
            throw ParameterError("event target " + g1.label(e.target_host) + " is not a host");
        }
        if (!std::isfinite(e.amplification) || e.amplification < 1.0) {
            throw ParameterError("event amplification must be finite and >= 1");
        }
    }
}

TrafficSimulator::TrafficSimulator(const LayerGraph& g1, TrafficScenario scenario)
    : scenario_(std::move(scenario)), rng_(scenario_.seed) {
    validate_scenario(scenario_, g1);
    const auto n = g1.size();
    roles_.resize(n);
    hosts_of_leaf_.resize(n);
    spines_of_leaf_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        roles_[v] = g1.role(v);
        if (roles_[v] == Role::Monitor) {
            throw ParameterError("data-layer topology contains monitor node " + g1.label(v));
        }
        if (roles_[v] != Role::LeafSwitch) continue;
        for (auto u : g1.neighbors(v)) {
            if (g1.role(u) == Role::Host) hosts_of_leaf_[v].push_back(u);
            if (g1.role(u) == Role::SpineSwitch) spines_of_leaf_[v].push_back(u);
        }
    }
}

double TrafficSimulator::standard_normal() {
    // Box-Muller on 53-bit uniforms in (0, 1); the sine partner is discarded.
    constexpr double kScale = 1.0 / 9007199254740992.0;
    const double u1 = (static_cast<double>(rng_() >> 11) + 0.5) * kScale;
    const double u2 = (static_cast<double>(rng_() >> 11) + 0.5) * kScale;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<TelemetryRecord> TrafficSimulator::step() {
    if (done()) throw UsageError("traffic scenario has no intervals left");
    const auto t = next_++;
    const auto n = roles_.size();
    std::vector<TelemetryRecord> records(n);
    for (std::size_t v = 0; v < n; ++v) {
        records[v].t = t;
        records[v].node = v;
        if (roles_[v] != Role::Host) continue;
        records[v].rx_bytes = std::llround(std::exp(scenario_.mu + scenario_.sigma * standard_normal()));
        records[v].tx_bytes = std::llround(std::exp(scenario_.mu + scenario_.sigma * standard_normal()));
    }
    for (const auto& e : scenario_.events) {
        if (e.start <= t && t < e.end) {
            auto& rx = records[e.target_host].rx_bytes;
            rx = std::llround(static_cast<double>(rx) * e.amplification);
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (roles_[v] != Role::LeafSwitch) continue;
        std::int64_t total = 0;
        for (auto h : hosts_of_leaf_[v]) total += records[h].rx_bytes;
        records[v].rx_bytes = total;
        const auto& spines = spines_of_leaf_[v];
        if (spines.empty()) continue;
        const auto count = static_cast<std::int64_t>(spines.size());
        for (std::int64_t i = 0; i < count; ++i) {
            records[spines[static_cast<std::size_t>(i)]].rx_bytes +=
                total / count + (i < total % count ? 1 : 0);
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (roles_[v] != Role::Host) records[v].tx_bytes = records[v].rx_bytes;
    }
    return records;
}

std::vector<TelemetryRecord> simulate_traffic(const LayerGraph& g1, const TrafficScenario& s) {
    TrafficSimulator sim(g1, s);
    std::vector<TelemetryRecord> out;
    out.reserve(static_cast<std::size_t>(s.intervals) * g1.size());
    while (!sim.done()) {
        auto batch = sim.step();
        out.insert(out.end(), batch.begin(), batch.end());
    }
    return out;
}

GraphSignal ingest_telemetry(std::span<const TelemetryRecord> records, std::int64_t t,
                             const LayerGraph& g1) {
    const auto n = g1.size();
    std::vector<double> values(n, 0.0);
    std::vector<char> seen(n, 0);
    for (const auto& r : records) {
        if (r.t != t) continue;
        if (r.node >= n) {
            throw TelemetryError("interval " + std::to_string(t) + ": record for unknown node " +
                                 std::to_string(r.node));
        }
        if (seen[r.node]) {
            throw TelemetryError("interval " + std::to_string(t) + ": duplicate record for node " +
                                 std::to_string(r.node));
        }
        if (r.rx_bytes < 0) {
            throw TelemetryError("interval " + std::to_string(t) + ": negative rx_bytes for node " +
                                 std::to_string(r.node));
        }
        seen[r.node] = 1;
        values[r.node] = static_cast<double>(r.rx_bytes);
    }
    std::string missing;
    std::size_t missing_count = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (seen[v]) continue;
        if (missing_count++ > 0) missing += ", ";
        missing += std::to_string(v) + " (" + g1.label(v) + ")";
    }
    if (missing_count > 0) {
        throw TelemetryError("interval " + std::to_string(t) + ": no record for " +
                             std::to_string(missing_count) + " node(s): " + missing);
    }
    return {g1.layer_index(), std::move(values), t};
}

void write_telemetry_jsonl(std::ostream& out, std::span<const TelemetryRecord> records) {
    for (const auto& r : records) {
        out << "{\"t\":" << r.t << ",\"node\":" << r.node << ",\"rx_bytes\":" << r.rx_bytes
            << ",\"tx_bytes\":" << r.tx_bytes << ",\"rx_errors\":" << r.rx_errors << "}\n";
    }
}

namespace {

std::int64_t counter_field(const json& j, const char* name, std::size_t line) {
    if (!j.contains(name) || !j[name].is_number_integer()) {
        throw FormatError("telemetry line " + std::to_string(line) + ": field '" + name +
                          "' missing or not an integer");
    }
    const auto value = j[name].get<std::int64_t>();
    if (value < 0) {
        throw FormatError("telemetry line " + std::to_string(line) + ": field '" + name +
                          "' is negative");
    }
    return value;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(what + ": " + e.what());
    }
}

template <typename T>
T field_or(const json& j, const char* name, T fallback) {
    if (!j.contains(name)) return fallback;
    try {
        return j[name].get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("field '") + name + "': " + e.what());
    }
}

template <typename T>
T required(const json& j, const char* name, const std::string& what) {
    if (!j.is_object() || !j.contains(name)) {
        throw FormatError(what + ": missing field '" + name + "'");
    }
    try {
        return j[name].get<T>();
    } catch (const json::exception& e) {
        throw FormatError(what + ": field '" + name + "': " + e.what());
    }
}

}  // namespace

std::vector<TelemetryRecord> read_telemetry_jsonl(std::istream& in) {
    std::vector<TelemetryRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const json j = parse_json(line, "telemetry line " + std::to_string(line_no));
        TelemetryRecord r;
        r.t = counter_field(j, "t", line_no);
        r.node = static_cast<std::size_t>(counter_field(j, "node", line_no));
        r.rx_bytes = counter_field(j, "rx_bytes", line_no);
        r.tx_bytes = counter_field(j, "tx_bytes", line_no);
        r.rx_errors = j.contains("rx_errors") ? counter_field(j, "rx_errors", line_no) : 0;
        out.push_back(r);
    }
    return out;
}

LayerGraph parse_topology(const std::string& text) {
    const json j = parse_json(text, "topology");
    if (j.contains("leaf_spine")) {
        const auto& spec = j["leaf_spine"];
        return gen_leaf_spine({required<std::size_t>(spec, "spines", "leaf_spine"),
                               required<std::size_t>(spec, "leaves", "leaf_spine"),
                               required<std::size_t>(spec, "hosts_per_leaf", "leaf_spine")});
    }
    const auto version = field_or<int>(j, "version", 1);
    if (version != 1) throw FormatError("unsupported topology version " + std::to_string(version));
    const auto nodes_json = required<json>(j, "nodes", "topology");
    std::vector<NodeInfo> nodes(nodes_json.size());
    std::vector<char> seen(nodes.size(), 0);
    for (const auto& node : nodes_json) {
        const auto id = required<std::size_t>(node, "id", "topology node");
        if (id >= nodes.size() || seen[id]) {
            throw FormatError("topology node ids must be unique and in 0.." +
                              std::to_string(nodes.size() - 1));
        }
        seen[id] = 1;
        nodes[id].label = field_or<std::string>(node, "label", "v" + std::to_string(id));
        nodes[id].role = role_from_string(field_or<std::string>(node, "role", "host"));
    }
    std::vector<NodePair> edges;
    for (const auto& e : required<json>(j, "edges", "topology")) {
        if (!e.is_array() || e.size() != 2) throw FormatError("topology edges must be [u, v] pairs");
        edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
    return build_layer(1, std::move(nodes), edges);
}

LayerGraph read_topology(const std::string& path) { return parse_topology(read_file(path)); }

std::string topology_to_json(const LayerGraph& g) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["nodes"] = nlohmann::ordered_json::array();
    for (std::size_t v = 0; v < g.size(); ++v) {
        j["nodes"].push_back(nlohmann::ordered_json{
            {"id", v}, {"label", g.label(v)}, {"role", std::string(to_string(g.role(v)))}});
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges()) j["edges"].push_back({e.u, e.v});
    return j.dump(2) + "\n";
}

TrafficScenario parse_scenario(const std::string& text) {
    const json j = parse_json(text, "scenario");
    TrafficScenario s;
    s.seed = required<std::uint64_t>(j, "seed", "scenario");
    s.intervals = required<std::int64_t>(j, "intervals", "scenario");
    const auto baseline = required<json>(j, "baseline", "scenario");
    const auto distribution = field_or<std::string>(baseline, "distribution", "lognormal");
    if (distribution != "lognormal") {
        throw FormatError("unsupported baseline distribution '" + distribution + "'");
    }
    s.mu = required<double>(baseline, "mu", "baseline");
    s.sigma = required<double>(baseline, "sigma", "baseline");
    for (const auto& e : field_or<json>(j, "events", json::array())) {
        s.events.push_back({required<std::int64_t>(e, "start_interval", "event"),
                            required<std::int64_t>(e, "end_interval", "event"),
                            required<std::size_t>(e, "target_host", "event"),
                            required<double>(e, "amplification", "event")});
    }
    return s;
}

TrafficScenario read_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

std::string scenario_to_json(const TrafficScenario& s) {
    nlohmann::ordered_json j;
    j["seed"] = s.seed;
    j["intervals"] = s.intervals;
    j["baseline"] = {{"distribution", "lognormal"}, {"mu", s.mu}, {"sigma", s.sigma}};
    j["events"] = nlohmann::ordered_json::array();
    for (const auto& e : s.events) {
        j["events"].push_back(nlohmann::ordered_json{{"start_interval", e.start},
                                                     {"end_interval", e.end},
                                                     {"target_host", e.target_host},
                                                     {"amplification", e.amplification}});
    }
    return j.dump(2) + "\n";
}

void write_signal_csv(std::ostream& out, const GraphSignal& x) {
    out << "node,value\n";
    for (std::size_t v = 0; v < x.size(); ++v) out << v << ',' << format_real(x[v]) << '\n';
}

}  // namespace gspnetmon
