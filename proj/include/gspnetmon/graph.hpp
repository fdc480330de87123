#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace gspnetmon {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using NodePair = std::pair<std::size_t, std::size_t>;

enum class Role { Host, LeafSwitch, SpineSwitch, Monitor };

std::string_view to_string(Role role);
Role role_from_string(std::string_view name);

struct NodeInfo {
    std::string label;
    Role role = Role::Host;
};

struct WeightedEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    double weight = 0.0;
};

/// One layer G_a = (X_a, E_a) of a multilayer network.
///
/// Vertices are dense ids 0..N-1 with a parallel label/role table. The
/// adjacency is symmetric with a zero diagonal and nonnegative weights;
/// layers built from edge lists are binary, coarsened layers may carry real
/// weights. Immutable after construction.
class LayerGraph {
public:
    LayerGraph() = default;

    /// Wraps a weighted adjacency. Throws GraphError unless the matrix is
    /// square, symmetric, nonnegative and has a zero diagonal.
    static LayerGraph from_adjacency(int layer_index, std::vector<NodeInfo> nodes,
                                     SparseMatrix adjacency);

    int layer_index() const { return layer_index_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<NodeInfo>& nodes() const { return nodes_; }
    const std::string& label(std::size_t v) const { return nodes_.at(v).label; }
    Role role(std::size_t v) const { return nodes_.at(v).role; }
    const SparseMatrix& adjacency() const { return adjacency_; }

    /// Neighbors of v in ascending id order.
    std::span<const std::size_t> neighbors(std::size_t v) const;
    std::size_t degree(std::size_t v) const { return neighbors(v).size(); }
    std::size_t max_degree() const;
    double weighted_degree(std::size_t v) const;

    /// Number of undirected edges (nonzero pairs u < v).
    std::size_t edge_count() const { return neighbor_list_.size() / 2; }
    /// Undirected edges with u < v, sorted by (u, v).
    std::vector<WeightedEdge> edges() const;
    /// Edge list without weights, suitable for rebuilding a binary layer.
    std::vector<NodePair> edge_pairs() const;
    bool is_binary() const;

    /// Copy of this graph tagged with another layer index.
    LayerGraph with_layer_index(int layer_index) const;

private:
    void index_neighbors();

    int layer_index_ = 0;
    std::vector<NodeInfo> nodes_;
    SparseMatrix adjacency_;
    std::vector<std::size_t> neighbor_offsets_{0};
    std::vector<std::size_t> neighbor_list_;
};

/// Binary layer from an edge list (a_ij = 1 iff (i, j) in E). Duplicate and
/// reversed edges collapse to one; self-loops and out-of-range endpoints throw
/// GraphError.
LayerGraph build_layer(int layer_index, std::vector<NodeInfo> nodes,
                       std::span<const NodePair> edges);

/// Convenience overload: N hosts labelled "v0".."v{N-1}" in layer 1.
LayerGraph build_layer(std::size_t node_count, std::span<const NodePair> edges);

/// Binary N_a x N_b matrix of links between layer a and layer b.
class InterlayerCoupling {
public:
    InterlayerCoupling(int from_layer, int to_layer, std::size_t rows, std::size_t cols,
                       std::span<const NodePair> links);

    int from_layer() const { return from_; }
    int to_layer() const { return to_; }
    const SparseMatrix& matrix() const { return matrix_; }
    std::size_t rows() const { return static_cast<std::size_t>(matrix_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(matrix_.cols()); }
    std::size_t link_count() const { return static_cast<std::size_t>(matrix_.nonZeros()); }
    /// Links as (row, col) pairs sorted by row then column.
    std::vector<NodePair> links() const;

private:
    int from_ = 0;
    int to_ = 0;
    SparseMatrix matrix_;
};

/// M = (G, C): layers plus the couplings between them.
class MultilayerNetwork {
public:
    const std::vector<LayerGraph>& layers() const { return layers_; }
    const std::vector<InterlayerCoupling>& couplings() const { return couplings_; }
    /// Layer with the given index; throws ParameterError if absent.
    const LayerGraph& layer(int layer_index) const;

private:
    friend MultilayerNetwork build_multilayer(std::vector<LayerGraph>,
                                              std::vector<InterlayerCoupling>);
    std::vector<LayerGraph> layers_;
    std::vector<InterlayerCoupling> couplings_;
};

MultilayerNetwork build_multilayer(std::vector<LayerGraph> layers,
                                   std::vector<InterlayerCoupling> couplings);

/// Flattened projection: disjoint union of the layer vertex sets (in layer
/// order), intra-layer edges plus one edge per coupling link. Labels are
/// prefixed with "L<index>/". The result has layer index 0.
LayerGraph project(const MultilayerNetwork& network);

bool is_connected(const LayerGraph& g);

/// Traffic sample on one layer: bytes received per node during one interval.
class GraphSignal {
public:
    GraphSignal() = default;
    /// Throws ParameterError on negative or non-finite values.
    GraphSignal(int layer_index, std::vector<double> values, std::int64_t interval = 0);

    int layer_index() const { return layer_index_; }
    std::int64_t interval() const { return interval_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    Vector to_vector() const;

private:
    int layer_index_ = 0;
    std::vector<double> values_;
    std::int64_t interval_ = 0;
};

}  // namespace gspnetmon
