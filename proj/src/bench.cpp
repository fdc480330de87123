#include "gspnetmon/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>

#include <json.hpp>

#include "gspnetmon/error.hpp"
#include "gspnetmon/sgwt.hpp"
#include "gspnetmon/spectral.hpp"

namespace gspnetmon {

LayerGraph random_graph_with_edges(std::size_t n, std::size_t edges, std::uint64_t seed) {
    if (n < 2 || edges < n - 1 || edges > n * (n - 1) / 2) {
        throw ParameterError("cannot build a connected graph with " + std::to_string(n) +
                             " vertices and " + std::to_string(edges) + " edges");
    }
    std::mt19937_64 rng(seed);
    std::set<NodePair> chosen;
    for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> parent(0, v - 1);
        chosen.emplace(parent(rng), v);
    }
    std::uniform_int_distribution<std::size_t> any(0, n - 1);
    while (chosen.size() < edges) {
        auto u = any(rng);
        auto v = any(rng);
        if (u == v) continue;
        chosen.emplace(std::min(u, v), std::max(u, v));
    }
    const std::vector<NodePair> list(chosen.begin(), chosen.end());
    return build_layer(n, list);
}

double BenchPoint::cost() const {
    const auto md = static_cast<double>(m);
    return md * static_cast<double>(e) + md * static_cast<double>(n) * static_cast<double>(j + 1);
}

BenchPoint time_sgwt_chebyshev(const LayerGraph& g, std::size_t degree, std::size_t scales,
                               std::size_t repeats, std::uint64_t seed) {
    const Laplacian l = laplacian(g);
    const auto bank = design_filter_bank(l.lambda_max_estimate, scales);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector x(static_cast<Eigen::Index>(g.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unit(rng);

    BenchPoint p{g.size(), g.edge_count(), degree, scales, 0, 0};
    std::int64_t best = -1;
    for (std::size_t r = 0; r < std::max<std::size_t>(1, repeats); ++r) {
        const auto start = std::chrono::steady_clock::now();
        const auto out = sgwt_chebyshev(x, l, bank, degree);
        const auto stop = std::chrono::steady_clock::now();
        p.matvec_count = out.matvec_count;
        const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
        if (best < 0 || ns < best) best = ns;
    }
    p.wall_ns = best;
    return p;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ParameterError("a line fit needs at least two paired samples");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double residual = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = y[i] - (fit.intercept + fit.slope * x[i]);
        residual += d * d;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - residual / syy : 1.0;
    return fit;
}

BenchReport run_bench(const BenchSweep& sweep) {
    if (sweep.edges_per_node == 0) throw ParameterError("edges_per_node must be positive");
    BenchReport report;
    std::uint64_t seed = sweep.seed;
    for (auto e : sweep.edge_counts) {
        const auto g = random_graph_with_edges(e / sweep.edges_per_node, e, seed++);
        for (auto m : sweep.degrees) {
            report.points.push_back(time_sgwt_chebyshev(g, m, sweep.scales, sweep.repeats, seed));
        }
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& p : report.points) {
        x.push_back(p.cost());
        y.push_back(static_cast<double>(p.wall_ns));
    }
    report.fit = fit_line(x, y);
    return report;
}

std::string bench_to_json(const BenchReport& report) {
    nlohmann::ordered_json j;
    j["points"] = nlohmann::ordered_json::array();
    for (const auto& p : report.points) {
        j["points"].push_back(nlohmann::ordered_json{{"N", p.n},
                                                     {"E", p.e},
                                                     {"M", p.m},
                                                     {"J", p.j},
                                                     {"matvec_count", p.matvec_count},
                                                     {"wall_ns", p.wall_ns}});
    }
    j["fit"] = {{"intercept", report.fit.intercept},
                {"slope", report.fit.slope},
                {"r_squared", report.fit.r_squared}};
    return j.dump(2) + "\n";
}

}  // namespace gspnetmon
