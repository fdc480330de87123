#include <doctest.h>

#include <vector>

#include "gspnetmon/error.hpp"
#include "gspnetmon/graph.hpp"
#include "oracles.hpp"

using namespace gspnetmon;

TEST_SUITE("graph") {
    TEST_CASE("build_layer transcribes the edge list") {
        const std::vector<NodePair> edges{{0, 1}, {1, 2}};
        const auto g = build_layer(3, edges);
        Eigen::MatrixXd expected(3, 3);
        expected << 0, 1, 0, 1, 0, 1, 0, 1, 0;
        CHECK(Eigen::MatrixXd(g.adjacency()) == expected);
        CHECK(g.edge_count() == 2);
        CHECK(g.is_binary());
    }

    TEST_CASE("single node without edges") {
        const auto g = build_layer(1, std::vector<NodePair>{});
        CHECK(g.size() == 1);
        CHECK(Eigen::MatrixXd(g.adjacency()) == Eigen::MatrixXd::Zero(1, 1));
    }

    TEST_CASE("duplicate and reversed edges collapse") {
        const std::vector<NodePair> edges{{0, 1}, {1, 0}, {0, 1}};
        const auto g = build_layer(2, edges);
        CHECK(g.edge_count() == 1);
        CHECK(g.adjacency().coeff(0, 1) == 1.0);
        CHECK(g.adjacency().coeff(1, 0) == 1.0);
    }

    TEST_CASE("bad edges are rejected") {
        CHECK_THROWS_AS(build_layer(3, std::vector<NodePair>{{0, 3}}), GraphError);
        CHECK_THROWS_AS(build_layer(3, std::vector<NodePair>{{1, 1}}), GraphError);
    }

    TEST_CASE("from_adjacency validates symmetry and weights") {
        SparseMatrix a(2, 2);
        a.insert(0, 1) = 1.0;
        CHECK_THROWS_AS(LayerGraph::from_adjacency(1, std::vector<NodeInfo>(2), a), GraphError);
        a.insert(1, 0) = 1.0;
        CHECK_NOTHROW(LayerGraph::from_adjacency(1, std::vector<NodeInfo>(2), a));
        SparseMatrix neg(2, 2);
        neg.insert(0, 1) = -1.0;
        neg.insert(1, 0) = -1.0;
        CHECK_THROWS_AS(LayerGraph::from_adjacency(1, std::vector<NodeInfo>(2), neg), GraphError);
        SparseMatrix loop(2, 2);
        loop.insert(0, 0) = 1.0;
        CHECK_THROWS_AS(LayerGraph::from_adjacency(1, std::vector<NodeInfo>(2), loop), GraphError);
    }

    TEST_CASE("neighbors are ascending") {
        const std::vector<NodePair> edges{{3, 0}, {0, 1}, {2, 0}};
        const auto g = build_layer(4, edges);
        const auto nb = g.neighbors(0);
        CHECK(std::vector<std::size_t>(nb.begin(), nb.end()) == std::vector<std::size_t>{1, 2, 3});
        CHECK(g.max_degree() == 3);
    }

    TEST_CASE("random layers are symmetric with zero diagonal and round-trip") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto g = oracle::random_connected(30, 0.1, seed);
            const Eigen::MatrixXd a(g.adjacency());
            CHECK(a == a.transpose());
            CHECK(a.diagonal().isZero(0.0));
            const auto pairs = g.edge_pairs();
            const auto rebuilt = build_layer(g.size(), pairs);
            CHECK(Eigen::MatrixXd(rebuilt.adjacency()) == a);
        }
    }

    TEST_CASE("build_multilayer accepts well-formed input") {
        const auto g1 = oracle::path_graph(8);
        const auto g2 = build_layer(2, std::vector<NodeInfo>(3), std::vector<NodePair>{{0, 1}});
        std::vector<NodePair> links;
        for (std::size_t i = 0; i < 8; ++i) links.emplace_back(i, i % 3);
        const auto m = build_multilayer({g1, g2}, {InterlayerCoupling(1, 2, 8, 3, links)});
        CHECK(m.layers().size() == 2);
        CHECK(m.couplings().front().link_count() == 8);
    }

    TEST_CASE("coupling with the wrong shape is a dimension error") {
        const auto g1 = oracle::path_graph(8);
        const auto g2 = build_layer(2, std::vector<NodeInfo>(3), std::vector<NodePair>{});
        CHECK_THROWS_AS(
            build_multilayer({g1, g2}, {InterlayerCoupling(1, 2, 8, 4, std::vector<NodePair>{})}),
            DimensionError);
    }

    TEST_CASE("coupling a layer to itself is rejected") {
        CHECK_THROWS_AS(InterlayerCoupling(1, 1, 2, 2, std::vector<NodePair>{}), GraphError);
    }

    TEST_CASE("single layer network and its projection") {
        const auto g = oracle::path_graph(5);
        const auto m = build_multilayer({g}, {});
        const auto p = project(m);
        CHECK(Eigen::MatrixXd(p.adjacency()) == Eigen::MatrixXd(g.adjacency()));
        CHECK(p.label(0) == "L1/v0");
    }

    TEST_CASE("projection of path(3) with one monitor") {
        const auto g1 = oracle::path_graph(3);
        const auto g2 = build_layer(2, std::vector<NodeInfo>(1), std::vector<NodePair>{});
        const std::vector<NodePair> links{{0, 0}, {1, 0}, {2, 0}};
        const auto p = project(build_multilayer({g1, g2}, {InterlayerCoupling(1, 2, 3, 1, links)}));
        CHECK(p.size() == 4);
        CHECK(p.edge_count() == 5);
        CHECK(is_connected(p));
    }

    TEST_CASE("projection edge count adds layers and couplings") {
        const auto g1 = oracle::random_connected(20, 0.2, 3);
        const auto g2 = oracle::random_connected(5, 0.5, 4).with_layer_index(2);
        std::vector<NodePair> links;
        for (std::size_t i = 0; i < 20; ++i) links.emplace_back(i, i / 4);
        const InterlayerCoupling c(1, 2, 20, 5, links);
        const auto p = project(build_multilayer({g1, g2}, {c}));
        CHECK(p.edge_count() == g1.edge_count() + g2.edge_count() + c.link_count());
    }

    TEST_CASE("empty coupling leaves the projection disconnected") {
        const auto g1 = oracle::path_graph(3);
        const auto g2 = oracle::path_graph(2).with_layer_index(2);
        const auto p = project(build_multilayer({g1, g2}, {InterlayerCoupling(1, 2, 3, 2, std::vector<NodePair>{})}));
        CHECK(p.size() == 5);
        CHECK_FALSE(is_connected(p));
    }

    TEST_CASE("graph signals reject negative and non-finite values") {
        CHECK_THROWS_AS(GraphSignal(1, {1.0, -1.0}), ParameterError);
        CHECK_THROWS_AS(GraphSignal(1, {std::nan("")}), ParameterError);
        const GraphSignal x(1, {1.0, 2.0}, 7);
        CHECK(x.interval() == 7);
        CHECK(x.to_vector()(1) == 2.0);
    }

    TEST_CASE("role names round-trip") {
        for (auto r : {Role::Host, Role::LeafSwitch, Role::SpineSwitch, Role::Monitor}) {
            CHECK(role_from_string(to_string(r)) == r);
        }
        CHECK_THROWS_AS(role_from_string("router"), FormatError);
    }
}
