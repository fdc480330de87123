#include "gspnetmon/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <tuple>

#include "gspnetmon/error.hpp"

namespace gspnetmon {

std::string_view to_string(Role role) {
    switch (role) {
        case Role::Host: return "host";
        case Role::LeafSwitch: return "leaf-switch";
        case Role::SpineSwitch: return "spine-switch";
        case Role::Monitor: return "monitor";
    }
    return "host";
}

Role role_from_string(std::string_view name) {
    if (name == "host") return Role::Host;
    if (name == "leaf-switch" || name == "leaf") return Role::LeafSwitch;
    if (name == "spine-switch" || name == "spine") return Role::SpineSwitch;
    if (name == "monitor") return Role::Monitor;
    throw FormatError("unknown node role '" + std::string(name) + "'");
}

LayerGraph LayerGraph::from_adjacency(int layer_index, std::vector<NodeInfo> nodes,
                                      SparseMatrix adjacency) {
    const auto n = static_cast<Eigen::Index>(nodes.size());
    if (adjacency.rows() != n || adjacency.cols() != n) {
        throw GraphError("adjacency is " + std::to_string(adjacency.rows()) + "x" +
                         std::to_string(adjacency.cols()) + " but the layer has " +
                         std::to_string(n) + " nodes");
    }
    adjacency.prune(0.0);
    double scale = 0.0;
    for (Eigen::Index k = 0; k < adjacency.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(adjacency, k); it; ++it) {
            if (!std::isfinite(it.value()) || it.value() < 0.0) {
                throw GraphError("adjacency weights must be finite and nonnegative");
            }
            if (it.row() == it.col()) {
                throw GraphError("self-loop at vertex " + std::to_string(it.row()));
            }
            scale = std::max(scale, it.value());
        }
    }
    SparseMatrix transposed = adjacency.transpose();
    const SparseMatrix diff = adjacency - transposed;
    for (Eigen::Index i = 0; i < diff.nonZeros(); ++i) {
        if (std::abs(diff.valuePtr()[i]) > 1e-12 * scale) {
            throw GraphError("adjacency is not symmetric");
        }
    }

    LayerGraph g;
    g.layer_index_ = layer_index;
    g.nodes_ = std::move(nodes);
    g.adjacency_ = 0.5 * (adjacency + transposed);
    g.adjacency_.makeCompressed();
    g.index_neighbors();
    return g;
}

void LayerGraph::index_neighbors() {
    const auto n = nodes_.size();
    // Column-major storage of a symmetric matrix: column v lists v's neighbors
    // in ascending row order.
    neighbor_offsets_.assign(n + 1, 0);
    neighbor_list_.clear();
    neighbor_list_.reserve(static_cast<std::size_t>(adjacency_.nonZeros()));
    for (std::size_t v = 0; v < n; ++v) {
        for (SparseMatrix::InnerIterator it(adjacency_, static_cast<Eigen::Index>(v)); it; ++it) {
            neighbor_list_.push_back(static_cast<std::size_t>(it.row()));
        }
        neighbor_offsets_[v + 1] = neighbor_list_.size();
    }
}

std::span<const std::size_t> LayerGraph::neighbors(std::size_t v) const {
    return {neighbor_list_.data() + neighbor_offsets_.at(v),
            neighbor_offsets_.at(v + 1) - neighbor_offsets_.at(v)};
}

std::size_t LayerGraph::max_degree() const {
    std::size_t best = 0;
    for (std::size_t v = 0; v < size(); ++v) best = std::max(best, degree(v));
    return best;
}

double LayerGraph::weighted_degree(std::size_t v) const {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(adjacency_, static_cast<Eigen::Index>(v)); it; ++it) {
        sum += it.value();
    }
    return sum;
}

std::vector<WeightedEdge> LayerGraph::edges() const {
    std::vector<WeightedEdge> out;
    out.reserve(edge_count());
    for (Eigen::Index v = 0; v < adjacency_.outerSize(); ++v) {
        for (SparseMatrix::InnerIterator it(adjacency_, v); it; ++it) {
            if (it.row() < v) {
                out.push_back({static_cast<std::size_t>(it.row()), static_cast<std::size_t>(v),
                               it.value()});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    return out;
}

std::vector<NodePair> LayerGraph::edge_pairs() const {
    std::vector<NodePair> out;
    for (const auto& e : edges()) out.emplace_back(e.u, e.v);
    return out;
}

bool LayerGraph::is_binary() const {
    const auto* values = adjacency_.valuePtr();
    return std::all_of(values, values + adjacency_.nonZeros(), [](double w) { return w == 1.0; });
}

LayerGraph LayerGraph::with_layer_index(int layer_index) const {
    LayerGraph copy = *this;
    copy.layer_index_ = layer_index;
    return copy;
}

LayerGraph build_layer(int layer_index, std::vector<NodeInfo> nodes,
                       std::span<const NodePair> edges) {
    const auto n = nodes.size();
    std::vector<NodePair> normalized;
    normalized.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) {
            throw GraphError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                             ") references an unknown node; layer has " + std::to_string(n));
        }
        if (u == v) throw GraphError("self-loop at node " + std::to_string(u));
        normalized.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(normalized.begin(), normalized.end());
    normalized.erase(std::unique(normalized.begin(), normalized.end()), normalized.end());

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * normalized.size());
    for (auto [u, v] : normalized) {
        triplets.emplace_back(static_cast<int>(u), static_cast<int>(v), 1.0);
        triplets.emplace_back(static_cast<int>(v), static_cast<int>(u), 1.0);
    }
    SparseMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    a.setFromTriplets(triplets.begin(), triplets.end());
    return LayerGraph::from_adjacency(layer_index, std::move(nodes), std::move(a));
}

LayerGraph build_layer(std::size_t node_count, std::span<const NodePair> edges) {
    std::vector<NodeInfo> nodes(node_count);
    for (std::size_t i = 0; i < node_count; ++i) nodes[i].label = "v" + std::to_string(i);
    return build_layer(1, std::move(nodes), edges);
}

InterlayerCoupling::InterlayerCoupling(int from_layer, int to_layer, std::size_t rows,
                                       std::size_t cols, std::span<const NodePair> links)
    : from_(from_layer), to_(to_layer) {
    if (from_layer == to_layer) {
        throw GraphError("coupling must join two different layers (got " +
                         std::to_string(from_layer) + " twice)");
    }
    std::vector<NodePair> sorted(links.begin(), links.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(sorted.size());
    for (auto [i, j] : sorted) {
        if (i >= rows || j >= cols) {
            throw GraphError("coupling link (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") outside a " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " coupling");
        }
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), 1.0);
    }
    matrix_.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
    matrix_.makeCompressed();
}

std::vector<NodePair> InterlayerCoupling::links() const {
    std::vector<NodePair> out;
    out.reserve(link_count());
    for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) {
            out.emplace_back(static_cast<std::size_t>(it.row()),
                             static_cast<std::size_t>(it.col()));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

const LayerGraph& MultilayerNetwork::layer(int layer_index) const {
    for (const auto& g : layers_) {
        if (g.layer_index() == layer_index) return g;
    }
    throw ParameterError("no layer with index " + std::to_string(layer_index));
}

MultilayerNetwork build_multilayer(std::vector<LayerGraph> layers,
                                   std::vector<InterlayerCoupling> couplings) {
    if (layers.empty()) throw ParameterError("a multilayer network needs at least one layer");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        for (std::size_t j = i + 1; j < layers.size(); ++j) {
            if (layers[i].layer_index() == layers[j].layer_index()) {
                throw ParameterError("duplicate layer index " +
                                     std::to_string(layers[i].layer_index()));
            }
        }
    }
    MultilayerNetwork m;
    m.layers_ = std::move(layers);
    for (const auto& c : couplings) {
        const auto& from = m.layer(c.from_layer());
        const auto& to = m.layer(c.to_layer());
        if (c.rows() != from.size() || c.cols() != to.size()) {
            throw DimensionError("coupling " + std::to_string(c.from_layer()) + "->" +
                                 std::to_string(c.to_layer()) + " is " +
                                 std::to_string(c.rows()) + "x" + std::to_string(c.cols()) +
                                 ", layers have " + std::to_string(from.size()) + " and " +
                                 std::to_string(to.size()) + " nodes");
        }
    }
    m.couplings_ = std::move(couplings);
    return m;
}

LayerGraph project(const MultilayerNetwork& network) {
    std::vector<NodeInfo> nodes;
    std::vector<NodePair> edges;
    std::vector<std::pair<int, std::size_t>> offsets;
    for (const auto& g : network.layers()) {
        const auto offset = nodes.size();
        offsets.emplace_back(g.layer_index(), offset);
        for (const auto& info : g.nodes()) {
            nodes.push_back({"L" + std::to_string(g.layer_index()) + "/" + info.label, info.role});
        }
        for (const auto& e : g.edges()) edges.emplace_back(offset + e.u, offset + e.v);
    }
    auto offset_of = [&](int layer_index) {
        for (auto [idx, off] : offsets) {
            if (idx == layer_index) return off;
        }
        return std::size_t{0};
    };
    for (const auto& c : network.couplings()) {
        const auto from = offset_of(c.from_layer());
        const auto to = offset_of(c.to_layer());
        for (auto [i, j] : c.links()) edges.emplace_back(from + i, to + j);
    }
    return build_layer(0, std::move(nodes), edges);
}

bool is_connected(const LayerGraph& g) {
    const auto n = g.size();
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        for (auto v : g.neighbors(u)) {
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                queue.push_back(v);
            }
        }
    }
    return reached == n;
}

GraphSignal::GraphSignal(int layer_index, std::vector<double> values, std::int64_t interval)
    : layer_index_(layer_index), values_(std::move(values)), interval_(interval) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
            throw ParameterError("signal value at node " + std::to_string(i) +
                                 " must be finite and nonnegative");
        }
    }
}

Vector GraphSignal::to_vector() const {
    return Eigen::Map<const Vector>(values_.data(), static_cast<Eigen::Index>(values_.size()));
}

}  // namespace gspnetmon
