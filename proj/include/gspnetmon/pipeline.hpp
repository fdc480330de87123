#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gspnetmon/graph.hpp"
#include "gspnetmon/monitor.hpp"
#include "gspnetmon/pyramid.hpp"
#include "gspnetmon/sdn_sim.hpp"

namespace gspnetmon {

struct RunConfig {
    std::filesystem::path topology;
    std::filesystem::path scenario;
    std::size_t levels = 2;
    std::size_t chebyshev_degree = 4;
    double cutoff_fraction = 0.5;
    double safety = 4.0;
    std::size_t top_m = 1;
    /// Overrides the scenario seed when set.
    std::optional<std::uint64_t> seed;
    std::filesystem::path output_dir = "out";
};

/// Reads a RunConfig JSON. Relative paths are resolved against the config
/// file's directory. GSPNETMON_SEED, if set, overrides the seed.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = {});
/// Applies GSPNETMON_SEED to `config` if the variable is set.
void apply_seed_env(RunConfig& config);
void validate_run_config(const RunConfig& config);

/// Everything the pipeline derives from a config before looking at a single
/// interval: topology, telemetry, monitor layer, pyramid plan and threshold.
struct PipelineContext {
    RunConfig config;
    LayerGraph g1;
    TrafficScenario scenario;
    std::vector<TelemetryRecord> records;
    MonitorLayer monitor;
    std::unique_ptr<PyramidPlan> plan;
    std::vector<std::int64_t> baseline_intervals;
    double tau = 0.0;

    GraphSignal g1_signal(std::int64_t t) const;
    GraphSignal g2_signal(std::int64_t t) const;
};

/// Simulates the scenario, builds the monitor layer and pyramid plan, and
/// calibrates tau on the event-free intervals (at least 5 are required).
PipelineContext prepare_pipeline(const RunConfig& config);

struct IntervalResult {
    std::int64_t t = 0;
    GraphSignal x1;
    GraphSignal x2;
    Pyramid pyramid;
    DetectionResult detection;
    AnomalyReport report;
};

IntervalResult analyze_interval(const PipelineContext& ctx, std::int64_t t);

/// One JSON document per pyramid level: {level, vertex_ids, parent_map,
/// approx, detail}; vertex_ids are level-0 ids.
std::string pyramid_level_json(const Pyramid& p, std::size_t level);

/// Writes report.json, g1.dot, level<j>.dot, level<j>.json and spectrum.csv
/// into `dir`, each file atomically.
void write_interval_artifacts(const PipelineContext& ctx, const IntervalResult& r,
                              const std::filesystem::path& dir);

struct RunOptions {
    std::optional<std::int64_t> interval;
    std::size_t jobs = 1;
    bool write_artifacts = true;
};

struct RunSummary {
    double tau = 0.0;
    std::vector<AnomalyReport> reports;
    std::vector<std::int64_t> intervals;
    bool any_detected = false;

    /// 2 if any processed interval was flagged, else 0.
    int exit_code() const { return any_detected ? 2 : 0; }
};

/// End-to-end run. Artifacts go to <output_dir>/t<interval>/ plus
/// telemetry.jsonl, g2.json and summary.json at the top level.
RunSummary run_pipeline(const RunConfig& config, const RunOptions& options = {});

}  // namespace gspnetmon
