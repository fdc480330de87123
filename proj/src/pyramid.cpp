#include "gspnetmon/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gspnetmon/error.hpp"
#include "gspnetmon/sgwt.hpp"

namespace gspnetmon {

namespace {

void require_coarsenable(const LayerGraph& g) {
    if (g.size() < 2) {
        throw ParameterError("cannot downsample a level with " + std::to_string(g.size()) +
                             " vertex");
    }
    if (!is_connected(g)) {
        throw GraphError("graph is disconnected; decompose each connected component separately");
    }
}

void orient(Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-10) {
            if (v(i) < 0.0) v = -v;
            return;
        }
    }
}

std::vector<std::size_t> top_half(const Vector& top) {
    const auto n = static_cast<std::size_t>(top.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return top(static_cast<Eigen::Index>(a)) > top(static_cast<Eigen::Index>(b));
    });
    order.resize((n + 1) / 2);
    std::sort(order.begin(), order.end());
    return order;
}

// Top eigenvector of a PSD matrix by power iteration on L itself; the
// largest eigenvalue dominates since the spectrum is nonnegative.
Vector power_top_eigenvector(const SparseMatrix& l) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    Vector v(l.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = unit(rng);
    v.normalize();
    for (int it = 0; it < 500; ++it) {
        Vector w = l * v;
        const double norm = w.norm();
        if (norm == 0.0) break;
        v = w / norm;
    }
    orient(v);
    return v;
}

struct Bands {
    Vector low;
    Vector high;
};

Bands split_bands(const Laplacian& l, const EigenBasis* basis, const Vector& x,
                  std::size_t chebyshev_degree) {
    const double lambda_max = l.lambda_max_estimate;
    if (!(lambda_max > 0.0)) return {x, Vector::Zero(x.size())};
    const auto low_kernel = SpectralKernel::pyramid_lowpass(lambda_max);
    const auto high_kernel = SpectralKernel::pyramid_highpass(lambda_max);
    if (basis != nullptr) {
        const Vector coefficients = basis->eigenvectors.transpose() * x;
        Vector low_hat(coefficients.size());
        Vector high_hat(coefficients.size());
        for (Eigen::Index k = 0; k < coefficients.size(); ++k) {
            const double lambda = basis->eigenvalues(k);
            low_hat(k) = low_kernel(lambda) * coefficients(k);
            high_hat(k) = high_kernel(lambda) * coefficients(k);
        }
        return {basis->eigenvectors * low_hat, basis->eigenvectors * high_hat};
    }
    const std::vector<ChebyshevApprox> approximations{
        chebyshev_fit(low_kernel, chebyshev_degree, lambda_max),
        chebyshev_fit(high_kernel, chebyshev_degree, lambda_max)};
    auto filtered = chebyshev_filter(l.matrix, approximations, x);
    return {std::move(filtered.outputs[0]), std::move(filtered.outputs[1])};
}

Vector restrict_to(const Vector& x, const std::vector<std::size_t>& kept) {
    Vector out(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = x(static_cast<Eigen::Index>(kept[i]));
    }
    return out;
}

std::vector<NodeInfo> kept_nodes(const LayerGraph& g, const std::vector<std::size_t>& kept) {
    std::vector<NodeInfo> nodes;
    nodes.reserve(kept.size());
    for (auto v : kept) nodes.push_back(g.nodes()[v]);
    return nodes;
}

}  // namespace

std::vector<std::size_t> Pyramid::sizes() const {
    std::vector<std::size_t> out;
    for (const auto& level : levels) out.push_back(level.size());
    return out;
}

std::vector<std::size_t> Pyramid::original_ids(std::size_t level) const {
    std::vector<std::size_t> ids(levels.at(level).size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    for (std::size_t j = level; j > 0; --j) {
        for (auto& id : ids) id = levels[j].parent_map[id];
    }
    return ids;
}

std::vector<std::size_t> select_vertices(const LayerGraph& g, const EigenBasis& basis) {
    require_coarsenable(g);
    if (basis.size() != g.size()) {
        throw DimensionError("basis has " + std::to_string(basis.size()) + " vectors, graph has " +
                             std::to_string(g.size()) + " vertices");
    }
    return top_half(basis.eigenvectors.col(basis.eigenvectors.cols() - 1));
}

std::vector<std::size_t> select_vertices(const LayerGraph& g, const Laplacian& l,
                                         std::size_t dense_cap) {
    if (l.size() <= dense_cap) return select_vertices(g, eigendecompose(l, dense_cap));
    require_coarsenable(g);
    return top_half(power_top_eigenvector(l.matrix));
}

Laplacian kron_reduce(const Laplacian& l, const std::vector<std::size_t>& kept) {
    const auto n = l.size();
    if (kept.empty() || kept.size() >= n) {
        throw ParameterError("Kron reduction needs a nonempty proper subset of the " +
                             std::to_string(n) + " vertices");
    }
    std::vector<char> is_kept(n, 0);
    for (auto v : kept) {
        if (v >= n) throw ParameterError("kept vertex " + std::to_string(v) + " out of range");
        is_kept[v] = 1;
    }
    std::vector<std::size_t> removed;
    for (std::size_t v = 0; v < n; ++v) {
        if (!is_kept[v]) removed.push_back(v);
    }
    const Eigen::MatrixXd dense(l.matrix);
    const auto nk = static_cast<Eigen::Index>(kept.size());
    const auto nr = static_cast<Eigen::Index>(removed.size());
    Eigen::MatrixXd kk(nk, nk);
    Eigen::MatrixXd kr(nk, nr);
    Eigen::MatrixXd rr(nr, nr);
    for (Eigen::Index i = 0; i < nk; ++i) {
        const auto gi = static_cast<Eigen::Index>(kept[i]);
        for (Eigen::Index j = 0; j < nk; ++j) kk(i, j) = dense(gi, static_cast<Eigen::Index>(kept[j]));
        for (Eigen::Index j = 0; j < nr; ++j) kr(i, j) = dense(gi, static_cast<Eigen::Index>(removed[j]));
    }
    for (Eigen::Index i = 0; i < nr; ++i) {
        const auto gi = static_cast<Eigen::Index>(removed[i]);
        for (Eigen::Index j = 0; j < nr; ++j) rr(i, j) = dense(gi, static_cast<Eigen::Index>(removed[j]));
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(rr);
    if (llt.info() != Eigen::Success) {
        throw Error("Kron reduction: removed block is singular (graph disconnected?)");
    }
    Eigen::MatrixXd reduced = kk - kr * llt.solve(kr.transpose());
    reduced = 0.5 * (reduced + reduced.transpose()).eval();

    const double scale = reduced.diagonal().cwiseAbs().maxCoeff();
    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index j = 0; j < nk; ++j) {
        for (Eigen::Index i = 0; i < nk; ++i) {
            const double value = reduced(i, j);
            if (i == j || std::abs(value) > 1e-13 * scale) {
                triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), value);
            }
        }
    }
    SparseMatrix sparse(nk, nk);
    sparse.setFromTriplets(triplets.begin(), triplets.end());
    sparse.makeCompressed();
    Laplacian out = laplacian_from_matrix(std::move(sparse));
    out.kind = l.kind;
    return out;
}

LayerGraph graph_from_laplacian(const Laplacian& l, int layer_index, std::vector<NodeInfo> nodes) {
    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index k = 0; k < l.matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(l.matrix, k); it; ++it) {
            if (it.row() != it.col() && it.value() < 0.0) {
                triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                                      -it.value());
            }
        }
    }
    SparseMatrix adjacency(l.matrix.rows(), l.matrix.cols());
    adjacency.setFromTriplets(triplets.begin(), triplets.end());
    return LayerGraph::from_adjacency(layer_index, std::move(nodes), std::move(adjacency));
}

PyramidLevel coarsen_once(PyramidLevel& level, const PyramidOptions& opts) {
    const LayerGraph& g = *level.graph;
    require_coarsenable(g);
    if (static_cast<std::size_t>(level.approx.size()) != g.size()) {
        throw DimensionError("level signal has " + std::to_string(level.approx.size()) +
                             " values, graph has " + std::to_string(g.size()));
    }
    const Laplacian l = laplacian(g);
    std::optional<EigenBasis> basis;
    if (g.size() <= opts.dense_cap) basis = eigendecompose(l, opts.dense_cap);
    const auto bands = split_bands(l, basis ? &*basis : nullptr, level.approx, opts.chebyshev_degree);
    const auto kept = basis ? select_vertices(g, *basis) : select_vertices(g, l, opts.dense_cap);
    level.detail = bands.high;

    PyramidLevel next;
    next.level_index = level.level_index + 1;
    next.graph = std::make_shared<const LayerGraph>(
        graph_from_laplacian(kron_reduce(l, kept), g.layer_index(), kept_nodes(g, kept)));
    next.approx = restrict_to(bands.low, kept);
    next.parent_map = kept;
    return next;
}

std::vector<std::size_t> pyramid_level_sizes(std::size_t n, std::size_t levels) {
    std::vector<std::size_t> sizes{n};
    for (std::size_t j = 0; j < levels; ++j) {
        if (sizes.back() < 2) {
            throw ParameterError(std::to_string(levels) + " levels is too deep for " +
                                 std::to_string(n) + " vertices");
        }
        sizes.push_back((sizes.back() + 1) / 2);
    }
    return sizes;
}

PyramidPlan::PyramidPlan(const LayerGraph& g, std::size_t levels, PyramidOptions opts)
    : opts_(opts) {
    if (levels == 0) throw ParameterError("a pyramid needs at least one level");
    if (opts_.chebyshev_degree == 0) throw ParameterError("Chebyshev degree must be at least 1");
    pyramid_level_sizes(g.size(), levels);

    graphs_.push_back(std::make_shared<const LayerGraph>(g));
    laplacians_.push_back(gspnetmon::laplacian(g));
    for (std::size_t j = 0; j <= levels; ++j) {
        const LayerGraph& current = *graphs_[j];
        const Laplacian& l = laplacians_[j];
        if (current.size() <= opts_.dense_cap) {
            bases_.push_back(eigendecompose(l, opts_.dense_cap));
        } else {
            bases_.emplace_back();
        }
        if (j == levels) break;
        kept_.push_back(bases_[j] ? select_vertices(current, *bases_[j])
                                  : select_vertices(current, l, opts_.dense_cap));
        Laplacian reduced = kron_reduce(l, kept_[j]);
        graphs_.push_back(std::make_shared<const LayerGraph>(
            graph_from_laplacian(reduced, current.layer_index(), kept_nodes(current, kept_[j]))));
        laplacians_.push_back(std::move(reduced));
    }
}

const EigenBasis* PyramidPlan::basis(std::size_t level) const {
    const auto& b = bases_.at(level);
    return b ? &*b : nullptr;
}

std::vector<std::size_t> PyramidPlan::sizes() const {
    std::vector<std::size_t> out;
    for (const auto& g : graphs_) out.push_back(g->size());
    return out;
}

PyramidPlan::Bands PyramidPlan::split(std::size_t level, const Vector& x) const {
    auto bands = split_bands(laplacians_[level], basis(level), x, opts_.chebyshev_degree);
    return {std::move(bands.low), std::move(bands.high)};
}

Pyramid PyramidPlan::decompose(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != graphs_.front()->size()) {
        throw DimensionError("signal has " + std::to_string(x.size()) + " values, graph has " +
                             std::to_string(graphs_.front()->size()));
    }
    Pyramid p;
    Vector approx = x;
    for (std::size_t j = 0; j < graphs_.size(); ++j) {
        auto bands = split(j, approx);
        PyramidLevel level;
        level.level_index = j;
        level.graph = graphs_[j];
        level.approx = std::move(approx);
        level.detail = std::move(bands.high);
        if (j > 0) level.parent_map = kept_[j - 1];
        p.levels.push_back(std::move(level));
        if (j < kept_.size()) approx = restrict_to(bands.low, kept_[j]);
    }
    return p;
}

Pyramid PyramidPlan::decompose(const GraphSignal& x) const { return decompose(x.to_vector()); }

Pyramid build_pyramid(const GraphSignal& x, const LayerGraph& g, std::size_t levels,
                      const PyramidOptions& opts) {
    return PyramidPlan(g, levels, opts).decompose(x);
}

}  // namespace gspnetmon
