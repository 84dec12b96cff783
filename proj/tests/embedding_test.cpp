#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "hyperdm/embedding.hpp"
#include "hyperdm/error.hpp"
#include "hyperdm/synthgen.hpp"
#include "oracles.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using hyperdm::embed;
using hyperdm::EmbedDims;
using hyperdm::Embedding;
using hyperdm::EmbeddingGraph;
using hyperdm::Error;
using hyperdm::Hypernetwork;
using hyperdm::merge_nodes;
using hyperdm::ParameterSet;
using hyperdm::q_values;
using hyperdm::Rng;
using hyperdm::state_embed;

namespace {

constexpr double kTol = 1e-10;

Hypernetwork small_instance() { return Hypernetwork(5, {{0, 1, 2}, {2, 3}, {3, 4}, {1}}); }

}  // namespace

TEST_CASE("zero attention weights give a uniform merge") {
    Hypernetwork g = small_instance();
    EmbeddingGraph graph = EmbeddingGraph::build(g);
    Rng rng(5);
    MatrixXd x = MatrixXd::Random(5, 3);
    MatrixXd attention = MatrixXd::Zero(1, 3);
    auto merged = merge_nodes(x, graph, attention);
    MatrixXd expected = (x.row(0) + x.row(1) + x.row(2)) / 3.0;
    CHECK((merged.y.row(0) - expected).cwiseAbs().maxCoeff() < 1e-15);
    for (const auto& alpha : merged.alpha)
        CHECK(alpha.sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a singleton hyperedge merges to its member embedding") {
    Hypernetwork g = small_instance();
    EmbeddingGraph graph = EmbeddingGraph::build(g);
    MatrixXd x = MatrixXd::Random(5, 4);
    MatrixXd attention = MatrixXd::Random(1, 4);
    auto merged = merge_nodes(x, graph, attention);
    CHECK((merged.y.row(3) - x.row(1)).cwiseAbs().maxCoeff() == 0.0);  // edge {1}
}

TEST_CASE("merge matches the dense oracle") {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        Hypernetwork g = oracle::random_hypernetwork(5, 4, rng);
        if (g.hyperedge_count() == 0) continue;
        EmbeddingGraph graph = EmbeddingGraph::build(g);
        MatrixXd x = MatrixXd::Random(graph.node_count(), 3);
        MatrixXd attention = MatrixXd::Random(1, 3);
        auto merged = merge_nodes(x, graph, attention);
        MatrixXd expected = oracle::dense_merge(x, oracle::incidence(g), attention);
        CHECK((merged.y - expected).cwiseAbs().maxCoeff() < kTol);
    }
}

TEST_CASE("mutual sole neighbors exchange embeddings without attenuation") {
    Hypernetwork g(3, {{0, 1}, {1, 2}});
    EmbeddingGraph graph = EmbeddingGraph::build(g);
    MatrixXd y = MatrixXd::Random(2, 3);
    hyperdm::LayerParams lp;
    lp.attention = MatrixXd::Random(1, 3);
    lp.neighbor_mix = MatrixXd::Random(3, 3);
    lp.self_mix = MatrixXd::Random(3, 3);
    lp.edge_combine = MatrixXd::Random(6, 3);
    lp.edge_to_node = MatrixXd::Random(3, 3);
    lp.node_self = MatrixXd::Random(3, 3);
    lp.node_combine = MatrixXd::Random(6, 3);
    auto agg = hyperedge_aggregate(y, graph, lp);
    CHECK((agg.y_neighbor.row(0) - y.row(1)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((agg.y_neighbor.row(1) - y.row(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("an isolated hyperedge aggregates with a zero neighbor term") {
    Hypernetwork g(4, {{0, 1}, {2, 3}});
    EmbeddingGraph graph = EmbeddingGraph::build(g);
    MatrixXd y = MatrixXd::Random(2, 3);
    hyperdm::LayerParams lp;
    lp.attention = MatrixXd::Random(1, 3);
    lp.neighbor_mix = MatrixXd::Random(3, 3);
    lp.self_mix = MatrixXd::Random(3, 3);
    lp.edge_combine = MatrixXd::Random(6, 3);
    lp.edge_to_node = MatrixXd::Random(3, 3);
    lp.node_self = MatrixXd::Random(3, 3);
    lp.node_combine = MatrixXd::Random(6, 3);
    auto agg = hyperedge_aggregate(y, graph, lp);
    CHECK(agg.y_neighbor.row(0).cwiseAbs().maxCoeff() == 0.0);
    VectorXd concat(6);
    concat.head(3) = VectorXd::Zero(3);
    concat.tail(3) = lp.self_mix * y.row(0).transpose();
    VectorXd expected = (lp.edge_combine.transpose() * concat).cwiseMax(0.0);
    CHECK((agg.y_out.row(0).transpose() - expected).cwiseAbs().maxCoeff() < kTol);
}

TEST_CASE("edge and node aggregation match the dense oracles") {
    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        Hypernetwork g = oracle::random_hypernetwork(6, 5, rng);
        if (g.hyperedge_count() == 0) continue;
        EmbeddingGraph graph = EmbeddingGraph::build(g);
        MatrixXd h = oracle::incidence(g);
        hyperdm::LayerParams lp;
        lp.attention = MatrixXd::Random(1, 3);
        lp.neighbor_mix = MatrixXd::Random(4, 3);
        lp.self_mix = MatrixXd::Random(4, 3);
        lp.edge_combine = MatrixXd::Random(8, 4);
        lp.edge_to_node = MatrixXd::Random(4, 4);
        lp.node_self = MatrixXd::Random(4, 3);
        lp.node_combine = MatrixXd::Random(8, 4);

        MatrixXd y = MatrixXd::Random(graph.edge_count(), 3);
        auto agg = hyperedge_aggregate(y, graph, lp);
        CHECK((agg.y_out - oracle::dense_edge_aggregate(y, h, lp)).cwiseAbs().maxCoeff() < kTol);

        MatrixXd x = MatrixXd::Random(graph.node_count(), 3);
        auto na = node_aggregate(x, agg.y_out, graph, lp);
        CHECK((na.x_out - oracle::dense_node_aggregate(x, agg.y_out, h, lp))
                  .cwiseAbs()
                  .maxCoeff() < kTol);
    }
}

TEST_CASE("a node in no hyperedge depends only on its own embedding") {
    Hypernetwork g(3, {{0, 1}});
    Hypernetwork residual = g.remove_node(0);  // node 2 isolated, node 1 in singleton edge
    EmbeddingGraph graph = EmbeddingGraph::build(residual);
    hyperdm::LayerParams lp;
    lp.attention = MatrixXd::Random(1, 2);
    lp.neighbor_mix = MatrixXd::Random(2, 2);
    lp.self_mix = MatrixXd::Random(2, 2);
    lp.edge_combine = MatrixXd::Random(4, 2);
    lp.edge_to_node = MatrixXd::Random(2, 2);
    lp.node_self = MatrixXd::Random(2, 2);
    lp.node_combine = MatrixXd::Random(4, 2);
    MatrixXd x = MatrixXd::Random(2, 2);
    MatrixXd y = MatrixXd::Random(1, 2);
    auto na = node_aggregate(x, y, graph, lp);
    int isolated_row = graph.node_row[2];
    VectorXd concat(4);
    concat.head(2) = VectorXd::Zero(2);
    concat.tail(2) = lp.node_self * x.row(isolated_row).transpose();
    VectorXd expected = (lp.node_combine.transpose() * concat).cwiseMax(0.0);
    CHECK((na.x_out.row(isolated_row).transpose() - expected).cwiseAbs().maxCoeff() < kTol);
}

TEST_CASE("embed with depth 0 returns the ones feature") {
    Rng rng(23);
    ParameterSet params = ParameterSet::random(EmbedDims{0, 8}, rng);
    Hypernetwork g = small_instance();
    Embedding fwd = embed(g, params);
    CHECK(fwd.node_embeddings() == MatrixXd::Ones(5, 1));
    CHECK(fwd.hyperedge_embeddings().size() == 0);
}

TEST_CASE("embed errors on an empty hypernetwork") {
    Rng rng(24);
    ParameterSet params = ParameterSet::random(EmbedDims{2, 4}, rng);
    Hypernetwork g(1, {{0}});
    Hypernetwork empty = g.remove_node(0);
    CHECK_THROWS_WITH_AS(embed(empty, params), doctest::Contains("empty-hypernetwork"), Error);
}

TEST_CASE("embed matches the chained dense oracle") {
    Rng rng(25);
    ParameterSet params = ParameterSet::random(EmbedDims{2, 6}, rng);
    for (int trial = 0; trial < 10; ++trial) {
        Hypernetwork g = oracle::random_hypernetwork(5, 4, rng);
        if (g.empty() || g.hyperedge_count() == 0) continue;
        Embedding fwd = embed(g, params);
        auto dense = oracle::dense_embed(g, params);
        CHECK((fwd.node_embeddings() - dense.x).cwiseAbs().maxCoeff() < kTol);
        CHECK((fwd.hyperedge_embeddings() - dense.y).cwiseAbs().maxCoeff() < kTol);
    }
}

TEST_CASE("embedding is exactly equivariant under node relabeling") {
    Rng rng(26);
    ParameterSet params = ParameterSet::random(EmbedDims{3, 5}, rng);
    hyperdm::GenConfig cfg;
    cfg.n_min = 8;
    cfg.n_max = 10;
    cfg.seed = 31;
    for (int trial = 0; trial < 5; ++trial) {
        cfg.seed = 31 + trial;
        Hypernetwork g = hyperdm::generate(cfg);
        int n = g.node_count();
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.uniform_int(0, i)]);
        std::vector<std::vector<int>> mapped;
        for (int e : g.hyperedges()) {
            std::vector<int> mem;
            for (int v : g.members(e)) mem.push_back(perm[v]);
            mapped.push_back(std::move(mem));
        }
        Hypernetwork permuted(n, std::move(mapped));

        Embedding base = embed(g, params);
        Embedding relabeled = embed(permuted, params);
        for (int v = 0; v < n; ++v) {
            Eigen::Index row = base.graph.node_row[v];
            Eigen::Index prow = relabeled.graph.node_row[perm[v]];
            CHECK(base.node_embeddings().row(row) == relabeled.node_embeddings().row(prow));
        }
    }
}

TEST_CASE("virtual node tracks a structurally identical real node bit-for-bit") {
    Rng rng(27);
    ParameterSet params = ParameterSet::random(EmbedDims{3, 4}, rng);
    Hypernetwork g(2, {{0, 1}});  // one hyperedge containing every node
    Embedding fwd = embed(g, params);
    hyperdm::StateCache state = state_embed(fwd, params);
    for (size_t l = 0; l < state.x.size(); ++l) {
        const MatrixXd& x = l == 0 ? fwd.x0 : fwd.layers[l - 1].x_out;
        CHECK(x.row(0).transpose() == state.x[l]);
    }
}

TEST_CASE("state embedding leaves real embeddings untouched and matches the oracle") {
    Rng rng(28);
    ParameterSet params = ParameterSet::random(EmbedDims{2, 5}, rng);
    for (int trial = 0; trial < 10; ++trial) {
        Hypernetwork g = oracle::random_hypernetwork(6, 5, rng);
        if (g.empty() || g.hyperedge_count() == 0) continue;
        Embedding fwd = embed(g, params);
        MatrixXd before = fwd.node_embeddings();
        hyperdm::StateCache state = state_embed(fwd, params);
        CHECK(fwd.node_embeddings() == before);
        VectorXd expected = oracle::dense_state(g, params);
        CHECK((state.state() - expected).cwiseAbs().maxCoeff() < kTol);
    }
}

TEST_CASE("q values vanish when the state or the feature projection is zero") {
    Rng rng(29);
    Hypernetwork g = small_instance();

    // node_combine = 0 forces the state (and all node embeddings) to zero
    ParameterSet zero_state = ParameterSet::random(EmbedDims{2, 4}, rng);
    for (auto& layer : zero_state.layers) layer.node_combine.setZero();
    Embedding fwd = embed(g, zero_state);
    auto state = state_embed(fwd, zero_state);
    VectorXd q = q_values(fwd, state, g.nodes(), zero_state);
    CHECK(q.cwiseAbs().maxCoeff() == 0.0);

    ParameterSet zero_feature = ParameterSet::random(EmbedDims{2, 4}, rng);
    zero_feature.q_feature.setZero();
    Embedding fwd2 = embed(g, zero_feature);
    auto state2 = state_embed(fwd2, zero_feature);
    VectorXd q2 = q_values(fwd2, state2, g.nodes(), zero_feature);
    CHECK(q2.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("q values match the outer-product oracle") {
    Rng rng(30);
    ParameterSet params = ParameterSet::random(EmbedDims{2, 6}, rng);
    Hypernetwork g = small_instance();
    Embedding fwd = embed(g, params);
    auto state = state_embed(fwd, params);
    std::vector<int> candidates = {0, 2, 3, 4};
    VectorXd q = q_values(fwd, state, candidates, params);
    for (size_t i = 0; i < candidates.size(); ++i) {
        Eigen::RowVectorXd action =
            fwd.node_embeddings().row(fwd.graph.node_row[candidates[i]]);
        double expected = oracle::dense_q(state.state(), action, params.q_out, params.q_feature);
        CHECK(q(static_cast<Eigen::Index>(i)) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK_THROWS_WITH_AS(q_values(fwd, state, {99}, params),
                         doctest::Contains("node-not-found"), Error);
}

TEST_CASE("all outputs stay finite across random instances") {
    Rng rng(31);
    ParameterSet params = ParameterSet::random(EmbedDims{3, 8}, rng);
    for (int trial = 0; trial < 10; ++trial) {
        Hypernetwork g = oracle::random_hypernetwork(10, 8, rng);
        if (g.empty() || g.hyperedge_count() == 0) continue;
        Embedding fwd = embed(g, params);
        CHECK(fwd.node_embeddings().allFinite());
        CHECK(fwd.hyperedge_embeddings().allFinite());
        auto state = state_embed(fwd, params);
        CHECK(state.state().allFinite());
        CHECK(q_values(fwd, state, g.nodes(), params).allFinite());
    }
}
