#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gspnetmon/graph.hpp"

namespace gspnetmon {

/// Connected random graph with exactly `edges` edges: a random spanning tree
/// plus uniformly drawn extra pairs. Needs n - 1 <= edges <= n(n-1)/2.
LayerGraph random_graph_with_edges(std::size_t n, std::size_t edges, std::uint64_t seed);

struct BenchPoint {
    std::size_t n = 0;
    std::size_t e = 0;
    std::size_t m = 0;
    std::size_t j = 0;
    std::size_t matvec_count = 0;
    std::int64_t wall_ns = 0;

    /// M|E| + M N (J + 1).
    double cost() const;
};

struct BenchSweep {
    std::vector<std::size_t> edge_counts{2000, 4000, 8000, 16000};
    std::size_t edges_per_node = 4;
    std::vector<std::size_t> degrees{3, 4, 5, 6};
    std::size_t scales = 4;
    std::size_t repeats = 15;
    std::uint64_t seed = 7;
};

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
};

struct BenchReport {
    std::vector<BenchPoint> points;
    LinearFit fit;
};

/// Minimum wall time of sgwt_chebyshev over `repeats` calls.
BenchPoint time_sgwt_chebyshev(const LayerGraph& g, std::size_t degree, std::size_t scales,
                               std::size_t repeats, std::uint64_t seed);

/// Ordinary least squares of y on x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Times every (|E|, M) pair of the sweep with N = |E| / edges_per_node and
/// fits wall_ns against the cost model.
BenchReport run_bench(const BenchSweep& sweep);

/// {"points":[{N,E,M,J,matvec_count,wall_ns}],"fit":{intercept,slope,r_squared}}
std::string bench_to_json(const BenchReport& report);

}  // namespace gspnetmon
