#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "gspnetmon/graph.hpp"
#include "gspnetmon/spectral.hpp"

namespace gspnetmon {

struct PyramidOptions {
    /// Levels up to this many vertices use the exact eigenbasis; larger ones
    /// use Chebyshev filtering and power iteration for vertex selection.
    std::size_t dense_cap = kDenseSolverCap;
    std::size_t chebyshev_degree = 4;
};

/// One resolution level. `approx` is x^j; `detail` is the high-pass output on
/// this level's full vertex set (computed before downsampling, and also on the
/// coarsest level). Signals are plain vectors: details can be negative.
struct PyramidLevel {
    std::size_t level_index = 0;
    std::shared_ptr<const LayerGraph> graph;
    Vector approx;
    Vector detail;
    /// Vertex id in level j-1 for every vertex of level j; empty at level 0.
    std::vector<std::size_t> parent_map;

    std::size_t size() const { return graph ? graph->size() : 0; }
};

struct Pyramid {
    std::vector<PyramidLevel> levels;

    std::vector<std::size_t> sizes() const;
    const PyramidLevel& coarsest() const { return levels.back(); }
    /// Level-0 id of every vertex of level j.
    std::vector<std::size_t> original_ids(std::size_t level) const;
};

/// ceil(N/2) vertices with the largest entries of the eigenvector of the top
/// Laplacian eigenvalue (sign convention as in eigendecompose), ties to the
/// lower id. Returned in ascending id order. Throws GraphError on a
/// disconnected graph and ParameterError for N < 2.
std::vector<std::size_t> select_vertices(const LayerGraph& g, const EigenBasis& basis);

/// Same rule without a full eigensystem: the top eigenvector comes from the
/// dense solver up to `dense_cap`, from shifted power iteration above it.
std::vector<std::size_t> select_vertices(const LayerGraph& g, const Laplacian& l,
                                         std::size_t dense_cap = kDenseSolverCap);

/// Schur complement L_KK - L_KR L_RR^-1 L_RK over the removed vertices. `kept`
/// must be a nonempty proper subset, sorted ascending.
Laplacian kron_reduce(const Laplacian& l, const std::vector<std::size_t>& kept);

/// Weighted graph whose combinatorial Laplacian is `l` (weights = -offdiag).
LayerGraph graph_from_laplacian(const Laplacian& l, int layer_index, std::vector<NodeInfo> nodes);

/// Filters level j with the complementary pyramid kernels, stores its detail
/// and returns level j+1 (approx restricted to the kept vertices, Kron-reduced
/// graph).
PyramidLevel coarsen_once(PyramidLevel& level, const PyramidOptions& opts = {});

/// Sizes N, ceil(N/2), ... for L coarsenings. Throws ParameterError if a level
/// with fewer than 2 vertices would need to be coarsened.
std::vector<std::size_t> pyramid_level_sizes(std::size_t n, std::size_t levels);

/// Graph-only part of a pyramid: reduced graphs, Laplacians, kept sets and
/// (when small enough) eigenbases. Built once, then applied to any number of
/// signals on the same graph.
class PyramidPlan {
public:
    PyramidPlan(const LayerGraph& g, std::size_t levels, PyramidOptions opts = {});

    std::size_t levels() const { return graphs_.size() - 1; }
    const PyramidOptions& options() const { return opts_; }
    const LayerGraph& graph(std::size_t level) const { return *graphs_.at(level); }
    const Laplacian& laplacian(std::size_t level) const { return laplacians_.at(level); }
    /// Eigenbasis of a level, if it is at or below the dense cap.
    const EigenBasis* basis(std::size_t level) const;
    /// Kept vertices of level j, i.e. the parent map of level j+1.
    const std::vector<std::size_t>& kept(std::size_t level) const { return kept_.at(level); }
    std::vector<std::size_t> sizes() const;

    Pyramid decompose(const Vector& x) const;
    Pyramid decompose(const GraphSignal& x) const;

private:
    struct Bands {
        Vector low;
        Vector high;
    };
    Bands split(std::size_t level, const Vector& x) const;

    PyramidOptions opts_;
    std::vector<std::shared_ptr<const LayerGraph>> graphs_;
    std::vector<Laplacian> laplacians_;
    std::vector<std::optional<EigenBasis>> bases_;
    std::vector<std::vector<std::size_t>> kept_;
};

Pyramid build_pyramid(const GraphSignal& x, const LayerGraph& g, std::size_t levels,
                      const PyramidOptions& opts = {});

}  // namespace gspnetmon
