// gspnetmon command-line front end.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gspnetmon/bench.hpp"
#include "gspnetmon/error.hpp"
#include "gspnetmon/io_util.hpp"
#include "gspnetmon/monitor.hpp"
#include "gspnetmon/pipeline.hpp"
#include "gspnetmon/render.hpp"
#include "gspnetmon/sdn_sim.hpp"

namespace fs = std::filesystem;
using namespace gspnetmon;

namespace {

struct Overrides {
    std::string config;
    std::string topology;
    std::string scenario;
    std::optional<std::size_t> levels;
    std::optional<std::size_t> degree;
    std::optional<double> cutoff;
    std::optional<double> safety;
    std::optional<std::size_t> top_m;
    std::optional<std::uint64_t> seed;
    std::string output_dir;
};

void add_config_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "RunConfig JSON file");
    cmd->add_option("--topology", o.topology, "Topology JSON (overrides config)");
    cmd->add_option("--scenario", o.scenario, "Scenario JSON (overrides config)");
    cmd->add_option("--levels", o.levels, "Pyramid levels L");
    cmd->add_option("--degree", o.degree, "Chebyshev degree M");
    cmd->add_option("--cutoff", o.cutoff, "High-frequency cutoff as a fraction of lambda_max");
    cmd->add_option("--safety", o.safety, "Threshold safety factor c");
    cmd->add_option("--top-m", o.top_m, "Vertices followed per level during localization");
    cmd->add_option("--seed", o.seed, "Scenario seed");
    cmd->add_option("--output-dir", o.output_dir, "Artifact directory");
}

RunConfig resolve_config(const Overrides& o) {
    RunConfig c;
    if (!o.config.empty()) {
        c = parse_run_config(read_file(o.config), fs::path(o.config).parent_path());
    }
    if (!o.topology.empty()) c.topology = o.topology;
    if (!o.scenario.empty()) c.scenario = o.scenario;
    if (o.levels) c.levels = *o.levels;
    if (o.degree) c.chebyshev_degree = *o.degree;
    if (o.cutoff) c.cutoff_fraction = *o.cutoff;
    if (o.safety) c.safety = *o.safety;
    if (o.top_m) c.top_m = *o.top_m;
    if (o.seed) c.seed = *o.seed;
    if (!o.output_dir.empty()) c.output_dir = o.output_dir;
    apply_seed_env(c);
    return c;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        write_file_atomic(out_path, text);
    }
}

std::string detection_json(std::int64_t t, const DetectionResult& d) {
    nlohmann::ordered_json j{{"t", t}, {"detected", d.detected}, {"hf_ratio", d.hf_ratio}, {"tau", d.tau}};
    return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multilayer spectral monitoring of simulated SDN traffic"};
    app.require_subcommand(1);

    Overrides o;
    std::string out;
    std::string format = "json";
    std::int64_t interval = 0;
    std::optional<std::int64_t> run_interval;
    std::size_t jobs = 1;

    auto* topo = app.add_subcommand("topo", "Generate or convert a leaf-spine topology");
    LeafSpineSpec spec;
    topo->add_option("--config", o.config, "RunConfig JSON; uses its topology");
    topo->add_option("--topology", o.topology, "Topology JSON to convert");
    topo->add_option("--spines", spec.spines, "Spine switches")->capture_default_str();
    topo->add_option("--leaves", spec.leaves, "Leaf switches")->capture_default_str();
    topo->add_option("--hosts-per-leaf", spec.hosts_per_leaf, "Hosts per leaf")->capture_default_str();
    topo->add_option("--format", format, "json, dot or svg")->capture_default_str();
    topo->add_option("--out", out, "Output file (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "Write the scenario's telemetry as JSON Lines");
    add_config_options(simulate, o);
    simulate->add_option("--out", out, "Output file (default stdout)");

    auto* monitor = app.add_subcommand("monitor", "Build the monitor layer or print a reduction report");
    add_config_options(monitor, o);
    std::optional<std::size_t> g1_size;
    monitor->add_option("--g1-size", g1_size, "Only report sizes for a data layer of this many nodes");
    monitor->add_option("--out", out, "Output file (default stdout)");

    auto* decompose = app.add_subcommand("decompose", "Pyramid of one interval's monitor signal");
    add_config_options(decompose, o);
    decompose->add_option("--interval", interval, "Interval t")->required();
    decompose->add_option("--out", out, "Output file (default stdout)");

    auto* detect_cmd = app.add_subcommand("detect", "Detection statistic for one interval");
    add_config_options(detect_cmd, o);
    detect_cmd->add_option("--interval", interval, "Interval t")->required();
    detect_cmd->add_option("--out", out, "Output file (default stdout)");

    auto* localize_cmd = app.add_subcommand("localize", "Anomaly report for one interval");
    add_config_options(localize_cmd, o);
    localize_cmd->add_option("--interval", interval, "Interval t")->required();
    localize_cmd->add_option("--out", out, "Output file (default stdout)");

    auto* run = app.add_subcommand("run", "Full pipeline with artifacts");
    add_config_options(run, o);
    run->add_option("--interval", run_interval, "Process only this interval");
    run->add_option("--jobs", jobs, "Intervals processed concurrently")->capture_default_str();

    auto* bench = app.add_subcommand("bench", "Time the Chebyshev SGWT against the cost model");
    BenchSweep sweep;
    bench->add_option("--edges", sweep.edge_counts, "Edge counts")->capture_default_str();
    bench->add_option("--degrees", sweep.degrees, "Chebyshev degrees")->capture_default_str();
    bench->add_option("--scales", sweep.scales, "Wavelet scales J")->capture_default_str();
    bench->add_option("--repeats", sweep.repeats, "Timing repeats per point")->capture_default_str();
    bench->add_option("--out", out, "Output file (default stdout)");

    auto* render_cmd = app.add_subcommand("render", "Color one interval's traffic on a graph");
    add_config_options(render_cmd, o);
    std::string layer = "g1";
    std::size_t level = 0;
    render_cmd->add_option("--interval", interval, "Interval t")->required();
    render_cmd->add_option("--layer", layer, "g1 or g2")->capture_default_str();
    render_cmd->add_option("--level", level, "Pyramid level when --layer g2")->capture_default_str();
    render_cmd->add_option("--format", format, "dot, svg or json")->capture_default_str();
    render_cmd->add_option("--out", out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (topo->parsed()) {
            LayerGraph g;
            if (!o.topology.empty()) {
                g = read_topology(o.topology);
            } else if (!o.config.empty()) {
                g = read_topology(resolve_config(o).topology.string());
            } else {
                g = gen_leaf_spine(spec);
            }
            const auto fmt = render_format_from_string(format);
            emit(out, fmt == RenderFormat::Json ? topology_to_json(g)
                                                : render(g, Vector::Zero(static_cast<Eigen::Index>(g.size())), fmt));
            return 0;
        }
        if (monitor->parsed() && g1_size) {
            const auto r = reduction_report(*g1_size, o.levels.value_or(2));
            nlohmann::ordered_json j{{"g1_size", r.g1_size},
                                     {"fan_in", r.fan_in},
                                     {"g2_size", r.g2_size},
                                     {"level_sizes", r.level_sizes},
                                     {"reduction_factor", r.reduction_factor}};
            emit(out, j.dump(2) + "\n");
            return 0;
        }
        if (bench->parsed()) {
            const auto report = run_bench(sweep);
            emit(out, bench_to_json(report));
            std::cerr << "R^2 = " << report.fit.r_squared << " over " << report.points.size()
                      << " points\n";
            return 0;
        }

        const RunConfig config = resolve_config(o);
        if (run->parsed()) {
            RunOptions options;
            options.interval = run_interval;
            options.jobs = jobs;
            const auto summary = run_pipeline(config, options);
            for (std::size_t i = 0; i < summary.intervals.size(); ++i) {
                const auto& r = summary.reports[i];
                std::cout << "t=" << summary.intervals[i] << " hf_ratio=" << format_real(r.hf_ratio)
                          << (r.detected ? " ANOMALY" : " ok");
                if (r.detected) {
                    std::cout << " suspect_g2=[";
                    for (std::size_t k = 0; k < r.suspect_g2.size(); ++k) {
                        std::cout << (k ? "," : "") << r.suspect_g2[k];
                    }
                    std::cout << "]";
                }
                std::cout << "\n";
            }
            std::cout << "tau=" << format_real(summary.tau) << " artifacts in "
                      << config.output_dir.string() << "\n";
            return summary.exit_code();
        }
        if (simulate->parsed()) {
            validate_run_config(config);
            const auto g1 = read_topology(config.topology.string());
            auto scenario = read_scenario(config.scenario.string());
            if (config.seed) scenario.seed = *config.seed;
            std::ostringstream text;
            write_telemetry_jsonl(text, simulate_traffic(g1, scenario));
            emit(out, text.str());
            return 0;
        }
        if (monitor->parsed()) {
            validate_run_config(config);
            const auto g1 = read_topology(config.topology.string());
            const auto layer2 = build_monitor_layer(g1);
            nlohmann::ordered_json j;
            j["fan_in"] = layer2.assignment.fan_in;
            j["blocks"] = layer2.assignment.blocks;
            j["g2"] = nlohmann::ordered_json::parse(topology_to_json(layer2.g2));
            j["level_sizes"] = pyramid_level_sizes(layer2.g2.size(), config.levels);
            emit(out, j.dump(2) + "\n");
            return 0;
        }

        const auto ctx = prepare_pipeline(config);
        const auto result = analyze_interval(ctx, interval);
        if (decompose->parsed()) {
            std::string text = "[\n";
            for (std::size_t j = 0; j < result.pyramid.levels.size(); ++j) {
                text += (j ? ",\n" : "") + pyramid_level_json(result.pyramid, j);
            }
            emit(out, text + "]\n");
            return 0;
        }
        if (detect_cmd->parsed()) {
            emit(out, detection_json(interval, result.detection));
            return result.detection.detected ? 2 : 0;
        }
        if (localize_cmd->parsed()) {
            emit(out, report_to_json(result.report));
            return result.report.detected ? 2 : 0;
        }
        if (render_cmd->parsed()) {
            const auto fmt = render_format_from_string(format);
            if (layer == "g1") {
                emit(out, render(ctx.g1, result.x1.to_vector(), fmt));
            } else if (layer == "g2") {
                if (level >= result.pyramid.levels.size()) {
                    throw ParameterError("level " + std::to_string(level) + " does not exist; pyramid has " +
                                         std::to_string(result.pyramid.levels.size()) + " levels");
                }
                const auto& lv = result.pyramid.levels[level];
                emit(out, render(*lv.graph, lv.approx, fmt));
            } else {
                throw ParameterError("unknown layer '" + layer + "' (expected g1 or g2)");
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "gspnetmon: error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
