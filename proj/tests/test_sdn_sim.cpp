#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "gspnetmon/error.hpp"
#include "gspnetmon/io_util.hpp"
#include "gspnetmon/sdn_sim.hpp"

using namespace gspnetmon;

namespace {

const std::string kSource = GSPNETMON_SOURCE_DIR;

TrafficScenario reference_scenario() {
    return read_scenario(kSource + "/data/reference/scenario.json");
}

}  // namespace

TEST_SUITE("sdn_sim") {
    TEST_CASE("leaf-spine counts") {
        const auto small = gen_leaf_spine({2, 4, 4});
        CHECK(small.size() == 22);
        CHECK(small.edge_count() == 24);
        const auto ref = gen_leaf_spine({2, 8, 16});
        CHECK(ref.size() == 138);
        CHECK(ref.edge_count() == 144);
        CHECK(is_connected(ref));
        CHECK(ref.role(0) == Role::SpineSwitch);
        CHECK(ref.role(2) == Role::LeafSwitch);
        CHECK(ref.role(10) == Role::Host);
        CHECK(ref.label(10) == "h0");
        CHECK_THROWS_AS(gen_leaf_spine({0, 1, 1}), ParameterError);
    }

    TEST_CASE("(1,1,1) is a path of three nodes") {
        const auto g = gen_leaf_spine({1, 1, 1});
        CHECK(g.size() == 3);
        CHECK(g.edge_count() == 2);
        CHECK(g.degree(1) == 2);
    }

    TEST_CASE("identity amplification changes nothing") {
        const auto g = gen_leaf_spine({2, 4, 4});
        TrafficScenario base{5, 6, std::log(1e5), 0.25, {}};
        TrafficScenario unit = base;
        unit.events.push_back({1, 4, 10, 1.0});
        CHECK(simulate_traffic(g, base) == simulate_traffic(g, unit));
    }

    TEST_CASE("same seed, same stream; different seed, different stream") {
        const auto g = gen_leaf_spine({2, 4, 4});
        TrafficScenario s{9, 4, std::log(1e5), 0.25, {{2, 3, 7, 5.0}}};
        CHECK(simulate_traffic(g, s) == simulate_traffic(g, s));
        TrafficScenario other = s;
        other.seed = 10;
        CHECK_FALSE(simulate_traffic(g, s) == simulate_traffic(g, other));
    }

    TEST_CASE("reference congestion dwarfs the target's baseline") {
        const auto g = gen_leaf_spine({2, 8, 16});
        const auto records = simulate_traffic(g, reference_scenario());
        std::vector<double> baseline;
        for (std::int64_t t = 0; t < 20; ++t) baseline.push_back(ingest_telemetry(records, t, g)[10]);
        std::sort(baseline.begin(), baseline.end());
        // numpy.percentile(., 95) with linear interpolation.
        const double pos = 0.95 * 19.0;
        const auto lo = static_cast<std::size_t>(pos);
        const double p95 = baseline[lo] + (pos - static_cast<double>(lo)) * (baseline[lo + 1] - baseline[lo]);
        const double congested = ingest_telemetry(records, 20, g)[10];
        // Frozen from tests/oracle/reference_oracle.py.
        CHECK(congested == 1758400.0);
        CHECK(p95 == doctest::Approx(137730.6));
        CHECK(congested >= 10.0 * p95);
    }

    TEST_CASE("counters are nonnegative and leaves sum their hosts") {
        const auto g = gen_leaf_spine({3, 5, 7});
        const auto records = simulate_traffic(g, {3, 4, std::log(1e4), 0.5, {{1, 3, 20, 30.0}}});
        CHECK(records.size() == 4 * g.size());
        for (std::int64_t t = 0; t < 4; ++t) {
            std::int64_t hosts = 0;
            std::int64_t spines = 0;
            for (const auto& r : records) {
                if (r.t != t) continue;
                CHECK(r.rx_bytes >= 0);
                CHECK(r.tx_bytes >= 0);
                CHECK(r.rx_errors == 0);
                if (g.role(r.node) == Role::Host) hosts += r.rx_bytes;
                if (g.role(r.node) == Role::SpineSwitch) spines += r.rx_bytes;
                if (g.role(r.node) == Role::LeafSwitch) {
                    std::int64_t sum = 0;
                    for (auto u : g.neighbors(r.node)) {
                        if (g.role(u) == Role::Host) sum += records[static_cast<std::size_t>(t) * g.size() + u].rx_bytes;
                    }
                    CHECK(r.rx_bytes == sum);
                }
            }
            CHECK(spines == hosts);
        }
    }

    TEST_CASE("scenario validation") {
        const auto g = gen_leaf_spine({2, 4, 4});
        CHECK_THROWS_AS(simulate_traffic(g, {1, 3, 1.0, 0.1, {{0, 4, 10, 2.0}}}), ParameterError);
        CHECK_THROWS_AS(simulate_traffic(g, {1, 3, 1.0, 0.1, {{0, 1, 2, 2.0}}}), ParameterError);
        CHECK_THROWS_AS(simulate_traffic(g, {1, 3, 1.0, 0.1, {{0, 1, 99, 2.0}}}), ParameterError);
        CHECK_THROWS_AS(simulate_traffic(g, {1, 3, 1.0, 0.1, {{0, 1, 10, 0.5}}}), ParameterError);
        CHECK_THROWS_AS(simulate_traffic(g, {1, 0, 1.0, 0.1, {}}), ParameterError);
    }

    TEST_CASE("ingest builds a full-length signal") {
        const auto g = gen_leaf_spine({2, 4, 4});
        const auto records = simulate_traffic(g, {1, 2, std::log(1e5), 0.25, {}});
        const auto x = ingest_telemetry(records, 1, g);
        CHECK(x.size() == g.size());
        CHECK(x.interval() == 1);
        CHECK(x[10] == static_cast<double>(records[g.size() + 10].rx_bytes));
    }

    TEST_CASE("missing and duplicate records") {
        const auto g = gen_leaf_spine({2, 4, 4});
        auto records = simulate_traffic(g, {1, 1, std::log(1e5), 0.25, {}});
        auto missing = records;
        missing.erase(missing.begin() + 12);
        try {
            ingest_telemetry(missing, 0, g);
            FAIL("expected a telemetry error");
        } catch (const TelemetryError& e) {
            CHECK(std::string(e.what()).find("12 (h6)") != std::string::npos);
        }
        auto duplicate = records;
        duplicate.push_back(records[3]);
        CHECK_THROWS_AS(ingest_telemetry(duplicate, 0, g), TelemetryError);
        auto unknown = records;
        unknown.back().node = 500;
        CHECK_THROWS_AS(ingest_telemetry(unknown, 0, g), TelemetryError);
    }

    TEST_CASE("golden interval signal CSV") {
        const auto g = read_topology(kSource + "/data/reference/topology.json");
        const auto records = simulate_traffic(g, reference_scenario());
        std::ostringstream csv;
        write_signal_csv(csv, ingest_telemetry(records, 0, g));
        CHECK(csv.str() == read_file(kSource + "/tests/golden/interval0_signal.csv"));
    }

    TEST_CASE("golden telemetry lines") {
        const auto g = gen_leaf_spine({2, 8, 16});
        const auto records = simulate_traffic(g, reference_scenario());
        std::ostringstream out;
        write_telemetry_jsonl(out, std::span(records).first(2 * g.size()));
        CHECK(out.str() == read_file(kSource + "/tests/golden/reference_t0_t1.jsonl"));
        std::istringstream in(out.str());
        const auto parsed = read_telemetry_jsonl(in);
        CHECK(parsed == std::vector<TelemetryRecord>(records.begin(), records.begin() + 2 * static_cast<std::ptrdiff_t>(g.size())));
    }

    TEST_CASE("telemetry parser rejects malformed lines") {
        std::istringstream bad_json("{\"t\":0,\"node\":1\n");
        CHECK_THROWS_AS(read_telemetry_jsonl(bad_json), FormatError);
        std::istringstream negative("{\"t\":0,\"node\":1,\"rx_bytes\":-5,\"tx_bytes\":0}\n");
        CHECK_THROWS_AS(read_telemetry_jsonl(negative), FormatError);
        std::istringstream missing("{\"t\":0,\"rx_bytes\":5,\"tx_bytes\":0}\n");
        CHECK_THROWS_AS(read_telemetry_jsonl(missing), FormatError);
    }

    TEST_CASE("topology and scenario JSON round trips") {
        const auto g = gen_leaf_spine({2, 3, 2});
        const auto back = parse_topology(topology_to_json(g));
        CHECK(Eigen::MatrixXd(back.adjacency()) == Eigen::MatrixXd(g.adjacency()));
        for (std::size_t v = 0; v < g.size(); ++v) {
            CHECK(back.label(v) == g.label(v));
            CHECK(back.role(v) == g.role(v));
        }
        const auto generated = parse_topology(R"({"leaf_spine":{"spines":2,"leaves":3,"hosts_per_leaf":2}})");
        CHECK(Eigen::MatrixXd(generated.adjacency()) == Eigen::MatrixXd(g.adjacency()));
        const auto s = reference_scenario();
        const auto s2 = parse_scenario(scenario_to_json(s));
        CHECK(s2.seed == 42);
        CHECK(s2.intervals == 21);
        CHECK(s2.mu == s.mu);
        REQUIRE(s2.events.size() == 1);
        CHECK(s2.events[0].target_host == 10);
        CHECK(s2.quiet_intervals().size() == 20);
        CHECK_THROWS_AS(parse_topology("{\"nodes\": ["), FormatError);
        CHECK_THROWS_AS(parse_topology(R"({"version":2,"nodes":[],"edges":[]})"), FormatError);
        CHECK_THROWS_AS(parse_scenario(R"({"seed":1})"), FormatError);
        CHECK_THROWS_AS(read_topology(kSource + "/data/no-such-file.json"), FormatError);
    }

    TEST_CASE("topology edges are normalized on load") {
        const auto g = parse_topology(
            R"({"version":1,"nodes":[{"id":1,"label":"b","role":"leaf"},{"id":0,"label":"a","role":"host"}],"edges":[[1,0],[0,1]]})");
        CHECK(g.size() == 2);
        CHECK(g.edge_count() == 1);
        CHECK(g.label(0) == "a");
        CHECK(g.role(1) == Role::LeafSwitch);
    }
}
