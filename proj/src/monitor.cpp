#include "gspnetmon/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include <json.hpp>

#include "gspnetmon/error.hpp"

namespace gspnetmon {

namespace {

std::vector<std::size_t> bfs_order(const LayerGraph& g) {
    const auto n = g.size();
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    for (std::size_t root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = 1;
        std::deque<std::size_t> queue{root};
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop_front();
            order.push_back(u);
            for (auto v : g.neighbors(u)) {
                if (!seen[v]) {
                    seen[v] = 1;
                    queue.push_back(v);
                }
            }
        }
    }
    return order;
}

// Ranking score for one level: |detail|, or |approx - mean| if the detail
// carries nothing above round-off.
Vector level_scores(const PyramidLevel& level) {
    const double detail_peak = level.detail.size() ? level.detail.cwiseAbs().maxCoeff() : 0.0;
    const double approx_peak = level.approx.size() ? level.approx.cwiseAbs().maxCoeff() : 0.0;
    if (detail_peak > 1e-12 * approx_peak && detail_peak > 0.0) return level.detail.cwiseAbs();
    return (level.approx.array() - level.approx.mean()).abs().matrix();
}

std::vector<std::size_t> top_ranked(const Vector& scores, std::vector<std::size_t> candidates,
                                    std::size_t top_m) {
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
        return scores(static_cast<Eigen::Index>(a)) > scores(static_cast<Eigen::Index>(b));
    });
    if (candidates.size() > top_m) candidates.resize(top_m);
    std::sort(candidates.begin(), candidates.end());
    return candidates;
}

}  // namespace

std::size_t monitor_fan_in(std::size_t g1_size) {
    if (g1_size < 4) {
        throw ParameterError("monitor layer needs at least 4 data-layer nodes, got " +
                             std::to_string(g1_size));
    }
    std::size_t k = 0;
    while ((std::size_t{1} << k) < g1_size) ++k;
    return k;
}

MonitorLayer build_monitor_layer(const LayerGraph& g1) {
    const auto n = g1.size();
    const auto k = monitor_fan_in(n);
    const auto order = bfs_order(g1);

    MonitorAssignment a;
    a.fan_in = k;
    a.block_of.assign(n, 0);
    for (std::size_t start = 0; start < n; start += k) {
        std::vector<std::size_t> block(order.begin() + static_cast<std::ptrdiff_t>(start),
                                       order.begin() + static_cast<std::ptrdiff_t>(std::min(n, start + k)));
        std::sort(block.begin(), block.end());
        for (auto v : block) a.block_of[v] = a.blocks.size();
        a.blocks.push_back(std::move(block));
    }

    std::vector<NodePair> edges;
    for (const auto& e : g1.edges()) {
        const auto bu = a.block_of[e.u];
        const auto bv = a.block_of[e.v];
        if (bu != bv) edges.emplace_back(bu, bv);
    }
    std::vector<NodeInfo> monitors(a.blocks.size());
    for (std::size_t i = 0; i < monitors.size(); ++i) {
        monitors[i] = {"m" + std::to_string(i), Role::Monitor};
    }
    LayerGraph g2 = build_layer(2, std::move(monitors), edges);

    std::vector<NodePair> links;
    links.reserve(n);
    for (std::size_t v = 0; v < n; ++v) links.emplace_back(v, a.block_of[v]);
    InterlayerCoupling coupling(g1.layer_index(), 2, n, a.blocks.size(), links);
    return {std::move(g2), std::move(coupling), std::move(a)};
}

GraphSignal aggregate(const GraphSignal& x1, const MonitorAssignment& a) {
    if (x1.size() != a.block_of.size()) {
        throw DimensionError("signal has " + std::to_string(x1.size()) +
                             " values, assignment covers " + std::to_string(a.block_of.size()) +
                             " nodes");
    }
    std::vector<double> x2(a.blocks.size(), 0.0);
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        for (auto v : a.blocks[i]) x2[i] += x1[v];
    }
    return {2, std::move(x2), x1.interval()};
}

ReductionReport reduction_report(std::size_t g1_size, std::size_t levels) {
    ReductionReport r;
    r.g1_size = g1_size;
    r.fan_in = monitor_fan_in(g1_size);
    r.g2_size = (g1_size + r.fan_in - 1) / r.fan_in;
    r.level_sizes = pyramid_level_sizes(r.g2_size, levels);
    r.reduction_factor = static_cast<double>(g1_size) / static_cast<double>(r.level_sizes.back());
    return r;
}

double threshold_from_ratios(std::span<const double> ratios, double safety) {
    if (ratios.size() < 5) {
        throw ParameterError("threshold calibration needs at least 5 baseline intervals, got " +
                             std::to_string(ratios.size()));
    }
    const double n = static_cast<double>(ratios.size());
    const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / n;
    double squares = 0.0;
    for (double r : ratios) squares += (r - mean) * (r - mean);
    return mean + safety * std::sqrt(squares / (n - 1.0));
}

double coarsest_hf_ratio(const PyramidPlan& plan, const Vector& x2, double cutoff_fraction) {
    const auto pyramid = plan.decompose(x2);
    return detect(plan, pyramid, 0.0, cutoff_fraction).hf_ratio;
}

double calibrate_threshold(const PyramidPlan& plan, std::span<const GraphSignal> baselines,
                           double cutoff_fraction, double safety) {
    std::vector<double> ratios;
    ratios.reserve(baselines.size());
    for (const auto& x : baselines) {
        ratios.push_back(coarsest_hf_ratio(plan, x.to_vector(), cutoff_fraction));
    }
    return threshold_from_ratios(ratios, safety);
}

DetectionResult detect(const Vector& coarsest_signal, const EigenBasis& coarsest_basis, double tau,
                       double cutoff_fraction) {
    if (coarsest_basis.size() < 2) {
        throw ParameterError("detection needs a coarsest level with at least 2 vertices");
    }
    DetectionResult r;
    r.tau = tau;
    r.hf_ratio = high_frequency_ratio(gft(coarsest_signal, coarsest_basis), coarsest_basis,
                                      cutoff_fraction);
    r.detected = r.hf_ratio > tau;
    return r;
}

DetectionResult detect(const PyramidPlan& plan, const Pyramid& pyramid, double tau,
                       double cutoff_fraction) {
    const EigenBasis* basis = plan.basis(plan.levels());
    if (basis == nullptr) {
        throw CapacityError("coarsest level has " + std::to_string(pyramid.coarsest().size()) +
                            " vertices, above the dense solver cap; add pyramid levels");
    }
    return detect(pyramid.coarsest().approx, *basis, tau, cutoff_fraction);
}

AnomalyReport quiet_report(const DetectionResult& detection) {
    AnomalyReport r;
    r.detected = detection.detected;
    r.hf_ratio = detection.hf_ratio;
    r.tau = detection.tau;
    return r;
}

AnomalyReport localize(const Pyramid& pyramid, const MonitorAssignment& a,
                       const DetectionResult& detection, std::size_t top_m) {
    if (!detection.detected) throw UsageError("localize called without a positive detection");
    if (top_m == 0) throw ParameterError("top_m must be at least 1");
    if (pyramid.levels.empty() || pyramid.levels.front().size() != a.blocks.size()) {
        throw DimensionError("pyramid does not live on the monitor layer of this assignment");
    }
    AnomalyReport r = quiet_report(detection);

    auto level = pyramid.levels.size() - 1;
    std::vector<std::size_t> everyone(pyramid.levels[level].size());
    std::iota(everyone.begin(), everyone.end(), std::size_t{0});
    Vector scores = level_scores(pyramid.levels[level]);
    r.nodes_examined = everyone.size();
    auto selected = top_ranked(scores, std::move(everyone), top_m);
    for (auto v : selected) r.path.push_back({level, v, scores(static_cast<Eigen::Index>(v))});

    while (level > 0) {
        const auto& here = pyramid.levels[level];
        const auto& finer = pyramid.levels[level - 1];
        std::vector<std::size_t> candidates;
        for (auto v : selected) {
            const auto parent = here.parent_map[v];
            candidates.push_back(parent);
            for (auto u : finer.graph->neighbors(parent)) candidates.push_back(u);
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        r.nodes_examined += candidates.size();
        --level;
        scores = level_scores(finer);
        selected = top_ranked(scores, std::move(candidates), top_m);
        for (auto v : selected) r.path.push_back({level, v, scores(static_cast<Eigen::Index>(v))});
    }

    r.suspect_g2 = selected;
    for (auto m : selected) {
        r.suspect_g1.insert(r.suspect_g1.end(), a.blocks[m].begin(), a.blocks[m].end());
    }
    std::sort(r.suspect_g1.begin(), r.suspect_g1.end());
    return r;
}

std::string report_to_json(const AnomalyReport& report) {
    nlohmann::ordered_json j;
    j["detected"] = report.detected;
    j["hf_ratio"] = report.hf_ratio;
    j["tau"] = report.tau;
    j["path"] = nlohmann::ordered_json::array();
    for (const auto& step : report.path) {
        j["path"].push_back(nlohmann::ordered_json{
            {"level", step.level}, {"vertex", step.vertex}, {"intensity", step.intensity}});
    }
    j["suspect_g2"] = report.suspect_g2;
    j["suspect_g1"] = report.suspect_g1;
    j["nodes_examined"] = report.nodes_examined;
    return j.dump(2) + "\n";
}

}  // namespace gspnetmon
