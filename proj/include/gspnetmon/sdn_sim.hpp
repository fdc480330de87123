#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gspnetmon/graph.hpp"

namespace gspnetmon {

struct LeafSpineSpec {
    std::size_t spines = 2;
    std::size_t leaves = 8;
    std::size_t hosts_per_leaf = 16;
};

/// Spines s0.., then leaves l0.., then hosts h0.. (host i hangs off leaf
/// i / hosts_per_leaf). Every spine links to every leaf. Layer 1.
LayerGraph gen_leaf_spine(const LeafSpineSpec& spec);

/// Half-open window [start, end) during which the target host's rx counter
/// is multiplied by `amplification`.
struct CongestionEvent {
    std::int64_t start = 0;
    std::int64_t end = 0;
    std::size_t target_host = 0;
    double amplification = 1.0;
};

struct TrafficScenario {
    std::uint64_t seed = 0;
    std::int64_t intervals = 1;
    /// Lognormal host traffic: log(bytes) ~ Normal(mu, sigma).
    double mu = 0.0;
    double sigma = 0.0;
    std::vector<CongestionEvent> events;

    /// True if any event covers interval t.
    bool has_event(std::int64_t t) const;
    /// Intervals not covered by any event, ascending.
    std::vector<std::int64_t> quiet_intervals() const;
};

/// Throws ParameterError unless the scenario fits the graph: intervals >= 1,
/// sigma >= 0, windows inside [0, T), targets are hosts, amplification finite
/// and >= 1.
void validate_scenario(const TrafficScenario& s, const LayerGraph& g1);

struct TelemetryRecord {
    std::int64_t t = 0;
    std::size_t node = 0;
    std::int64_t rx_bytes = 0;
    std::int64_t tx_bytes = 0;
    std::int64_t rx_errors = 0;

    bool operator==(const TelemetryRecord&) const = default;
};

/// Interval-by-interval counter generator.
///
/// Hosts draw rx and tx from the lognormal (in id order, rx then tx, so the
/// draw sequence does not depend on events). A leaf receives the sum of its
/// hosts; each leaf total is split evenly over the spines above it, with the
/// integer remainder going to the lowest spine ids. Switch tx equals rx.
class TrafficSimulator {
public:
    TrafficSimulator(const LayerGraph& g1, TrafficScenario scenario);

    bool done() const { return next_ >= scenario_.intervals; }
    std::int64_t next_interval() const { return next_; }
    /// Records for the next interval in node order.
    std::vector<TelemetryRecord> step();

private:
    double standard_normal();

    std::vector<Role> roles_;
    std::vector<std::vector<std::size_t>> hosts_of_leaf_;
    std::vector<std::vector<std::size_t>> spines_of_leaf_;
    TrafficScenario scenario_;
    std::mt19937_64 rng_;
    std::int64_t next_ = 0;
};

std::vector<TelemetryRecord> simulate_traffic(const LayerGraph& g1, const TrafficScenario& s);

/// Signal of rx_bytes for interval t. Records of other intervals are ignored.
/// Throws TelemetryError on missing nodes (listing them), duplicates or
/// unknown node ids.
GraphSignal ingest_telemetry(std::span<const TelemetryRecord> records, std::int64_t t,
                             const LayerGraph& g1);

/// One JSON object per line, fields in the order t, node, rx_bytes,
/// tx_bytes, rx_errors.
void write_telemetry_jsonl(std::ostream& out, std::span<const TelemetryRecord> records);
std::vector<TelemetryRecord> read_telemetry_jsonl(std::istream& in);

/// {"version":1,"nodes":[{"id","label","role"}],"edges":[[u,v],...]} or the
/// generator form {"leaf_spine":{"spines","leaves","hosts_per_leaf"}}.
LayerGraph read_topology(const std::string& path);
LayerGraph parse_topology(const std::string& text);
std::string topology_to_json(const LayerGraph& g);

/// {"seed","intervals","baseline":{"distribution":"lognormal","mu","sigma"},
///  "events":[{"start_interval","end_interval","target_host","amplification"}]}
TrafficScenario read_scenario(const std::string& path);
TrafficScenario parse_scenario(const std::string& text);
std::string scenario_to_json(const TrafficScenario& s);

/// CSV `node,value` with 17 significant digits.
void write_signal_csv(std::ostream& out, const GraphSignal& x);

}  // namespace gspnetmon
