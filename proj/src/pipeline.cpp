#include "gspnetmon/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gspnetmon/error.hpp"
#include "gspnetmon/io_util.hpp"
#include "gspnetmon/render.hpp"
#include "gspnetmon/spectral.hpp"

namespace gspnetmon {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T config_field(const json& j, const char* name, T fallback) {
    if (!j.contains(name)) return fallback;
    try {
        return j[name].get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("run config field '") + name + "': " + e.what());
    }
}

fs::path resolve(const fs::path& base, const fs::path& p) {
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return base / p;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("run config: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("run config must be a JSON object");
    RunConfig c;
    c.topology = resolve(base_dir, config_field<std::string>(j, "topology", ""));
    c.scenario = resolve(base_dir, config_field<std::string>(j, "scenario", ""));
    c.levels = config_field<std::size_t>(j, "levels", c.levels);
    c.chebyshev_degree = config_field<std::size_t>(j, "chebyshev_degree", c.chebyshev_degree);
    c.cutoff_fraction = config_field<double>(j, "cutoff_fraction", c.cutoff_fraction);
    c.safety = config_field<double>(j, "safety", c.safety);
    c.top_m = config_field<std::size_t>(j, "top_m", c.top_m);
    if (j.contains("seed") && !j["seed"].is_null()) c.seed = config_field<std::uint64_t>(j, "seed", 0);
    c.output_dir = resolve(base_dir, config_field<std::string>(j, "output_dir", "out"));
    return c;
}

void apply_seed_env(RunConfig& config) {
    const char* env = std::getenv("GSPNETMON_SEED");
    if (env == nullptr || *env == '\0') return;
    try {
        std::size_t used = 0;
        const auto value = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
        config.seed = value;
    } catch (const std::exception&) {
        throw ParameterError(std::string("GSPNETMON_SEED is not an unsigned integer: ") + env);
    }
}

RunConfig load_run_config(const fs::path& path) {
    RunConfig c = parse_run_config(read_file(path.string()), path.parent_path());
    apply_seed_env(c);
    return c;
}

void validate_run_config(const RunConfig& c) {
    if (c.topology.empty()) throw ParameterError("run config has no topology path");
    if (c.scenario.empty()) throw ParameterError("run config has no scenario path");
    if (c.levels == 0) throw ParameterError("levels must be at least 1");
    if (c.chebyshev_degree == 0) throw ParameterError("chebyshev_degree must be at least 1");
    if (!(c.cutoff_fraction > 0.0 && c.cutoff_fraction < 1.0)) {
        throw ParameterError("cutoff_fraction must lie in (0, 1)");
    }
    if (!(c.safety >= 0.0)) throw ParameterError("safety must be >= 0");
    if (c.top_m == 0) throw ParameterError("top_m must be at least 1");
}

GraphSignal PipelineContext::g1_signal(std::int64_t t) const {
    return ingest_telemetry(records, t, g1);
}

GraphSignal PipelineContext::g2_signal(std::int64_t t) const {
    return aggregate(g1_signal(t), monitor.assignment);
}

PipelineContext prepare_pipeline(const RunConfig& config) {
    validate_run_config(config);
    LayerGraph g1 = read_topology(config.topology.string());
    TrafficScenario scenario = read_scenario(config.scenario.string());
    if (config.seed) scenario.seed = *config.seed;
    auto records = simulate_traffic(g1, scenario);
    MonitorLayer monitor = build_monitor_layer(g1);
    PyramidOptions opts;
    opts.chebyshev_degree = config.chebyshev_degree;
    auto plan = std::make_unique<PyramidPlan>(monitor.g2, config.levels, opts);
    auto baseline_intervals = scenario.quiet_intervals();

    PipelineContext ctx{config,
                        std::move(g1),
                        std::move(scenario),
                        std::move(records),
                        std::move(monitor),
                        std::move(plan),
                        std::move(baseline_intervals),
                        0.0};
    std::vector<GraphSignal> baselines;
    for (auto t : ctx.baseline_intervals) baselines.push_back(ctx.g2_signal(t));
    ctx.tau = calibrate_threshold(*ctx.plan, baselines, config.cutoff_fraction, config.safety);
    return ctx;
}

IntervalResult analyze_interval(const PipelineContext& ctx, std::int64_t t) {
    if (t < 0 || t >= ctx.scenario.intervals) {
        throw ParameterError("interval " + std::to_string(t) + " outside [0, " +
                             std::to_string(ctx.scenario.intervals) + ")");
    }
    IntervalResult r;
    r.t = t;
    r.x1 = ctx.g1_signal(t);
    r.x2 = aggregate(r.x1, ctx.monitor.assignment);
    r.pyramid = ctx.plan->decompose(r.x2);
    r.detection = detect(*ctx.plan, r.pyramid, ctx.tau, ctx.config.cutoff_fraction);
    r.report = r.detection.detected
                   ? localize(r.pyramid, ctx.monitor.assignment, r.detection, ctx.config.top_m)
                   : quiet_report(r.detection);
    return r;
}

std::string pyramid_level_json(const Pyramid& p, std::size_t level) {
    const auto& lv = p.levels.at(level);
    nlohmann::ordered_json j;
    j["level"] = lv.level_index;
    j["vertex_ids"] = p.original_ids(level);
    j["parent_map"] = lv.parent_map;
    j["approx"] = std::vector<double>(lv.approx.data(), lv.approx.data() + lv.approx.size());
    j["detail"] = std::vector<double>(lv.detail.data(), lv.detail.data() + lv.detail.size());
    return j.dump(2) + "\n";
}

void write_interval_artifacts(const PipelineContext& ctx, const IntervalResult& r,
                              const fs::path& dir) {
    write_file_atomic(dir / "report.json", report_to_json(r.report));
    write_file_atomic(dir / "g1.dot", render_dot(ctx.g1, r.x1.to_vector(), "g1"));
    for (std::size_t j = 0; j < r.pyramid.levels.size(); ++j) {
        const auto& lv = r.pyramid.levels[j];
        const auto stem = "level" + std::to_string(j);
        write_file_atomic(dir / (stem + ".dot"), render_dot(*lv.graph, lv.approx, stem));
        write_file_atomic(dir / (stem + ".json"), pyramid_level_json(r.pyramid, j));
    }
    std::ostringstream csv;
    const auto* basis = ctx.plan->basis(ctx.plan->levels());
    write_spectrum_csv(csv, gft(r.pyramid.coarsest().approx, *basis), *basis);
    write_file_atomic(dir / "spectrum.csv", csv.str());
}

RunSummary run_pipeline(const RunConfig& config, const RunOptions& options) {
    const PipelineContext ctx = prepare_pipeline(config);
    RunSummary summary;
    summary.tau = ctx.tau;
    if (options.interval) {
        summary.intervals.push_back(*options.interval);
    } else {
        for (std::int64_t t = 0; t < ctx.scenario.intervals; ++t) summary.intervals.push_back(t);
    }

    const auto count = summary.intervals.size();
    std::vector<std::optional<IntervalResult>> results(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (auto i = next++; i < count; i = next++) {
            try {
                results[i] = analyze_interval(ctx, summary.intervals[i]);
                if (options.write_artifacts) {
                    write_interval_artifacts(ctx, *results[i],
                                             config.output_dir /
                                                 ("t" + std::to_string(summary.intervals[i])));
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const auto jobs = std::max<std::size_t>(1, std::min(options.jobs, count));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    nlohmann::ordered_json j;
    j["tau"] = ctx.tau;
    j["g1_size"] = ctx.g1.size();
    j["g2_size"] = ctx.monitor.g2.size();
    j["level_sizes"] = ctx.plan->sizes();
    j["baseline_intervals"] = ctx.baseline_intervals;
    j["intervals"] = nlohmann::ordered_json::array();
    for (auto& r : results) {
        summary.any_detected = summary.any_detected || r->report.detected;
        j["intervals"].push_back(nlohmann::ordered_json{
            {"t", r->t}, {"detected", r->report.detected}, {"hf_ratio", r->report.hf_ratio}});
        summary.reports.push_back(std::move(r->report));
    }
    if (options.write_artifacts) {
        std::ostringstream telemetry;
        write_telemetry_jsonl(telemetry, ctx.records);
        write_file_atomic(config.output_dir / "telemetry.jsonl", telemetry.str());
        write_file_atomic(config.output_dir / "g2.json", topology_to_json(ctx.monitor.g2));
        write_file_atomic(config.output_dir / "summary.json", j.dump(2) + "\n");
    }
    return summary;
}

}  // namespace gspnetmon
