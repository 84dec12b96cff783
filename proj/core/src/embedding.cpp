#include "hyperdm/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "hyperdm/error.hpp"

namespace hyperdm {

namespace {

double fan_in_bound(int fan_in) { return 1.0 / std::sqrt(static_cast<double>(fan_in)); }

void fill_uniform(Eigen::MatrixXd& m, double bound, Rng& rng) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.uniform_symmetric(bound);
}

Eigen::ArrayXXd relu_mask(const Eigen::MatrixXd& pre) {
    return (pre.array() > 0.0).cast<double>();
}

}  // namespace

ParameterSet ParameterSet::zeros(EmbedDims dims) {
    ParameterSet p;
    p.dims = dims;
    p.layers.resize(dims.depth);
    for (int l = 0; l < dims.depth; ++l) {
        int din = dims.dim_at(l);
        int dout = dims.dim_at(l + 1);
        LayerParams& lp = p.layers[l];
        lp.attention = Eigen::MatrixXd::Zero(1, din);
        lp.neighbor_mix = Eigen::MatrixXd::Zero(dout, din);
        lp.self_mix = Eigen::MatrixXd::Zero(dout, din);
        lp.edge_combine = Eigen::MatrixXd::Zero(2 * dout, dout);
        lp.edge_to_node = Eigen::MatrixXd::Zero(dout, dout);
        lp.node_self = Eigen::MatrixXd::Zero(dout, din);
        lp.node_combine = Eigen::MatrixXd::Zero(2 * dout, dout);
    }
    p.q_out = Eigen::MatrixXd::Zero(dims.final_dim(), 1);
    p.q_feature = Eigen::MatrixXd::Zero(dims.final_dim(), 1);
    return p;
}

ParameterSet ParameterSet::random(EmbedDims dims, Rng& rng) {
    ParameterSet p = zeros(dims);
    for (int l = 0; l < dims.depth; ++l) {
        int din = dims.dim_at(l);
        int dout = dims.dim_at(l + 1);
        LayerParams& lp = p.layers[l];
        fill_uniform(lp.attention, fan_in_bound(din), rng);
        fill_uniform(lp.neighbor_mix, fan_in_bound(din), rng);
        fill_uniform(lp.self_mix, fan_in_bound(din), rng);
        fill_uniform(lp.edge_combine, fan_in_bound(2 * dout), rng);
        fill_uniform(lp.edge_to_node, fan_in_bound(dout), rng);
        fill_uniform(lp.node_self, fan_in_bound(din), rng);
        fill_uniform(lp.node_combine, fan_in_bound(2 * dout), rng);
    }
    fill_uniform(p.q_out, fan_in_bound(dims.final_dim()), rng);
    fill_uniform(p.q_feature, fan_in_bound(dims.final_dim()), rng);
    return p;
}

void ParameterSet::for_each(const std::function<void(const std::string&, Eigen::MatrixXd&)>& fn) {
    for (size_t l = 0; l < layers.size(); ++l) {
        std::string prefix = "layer" + std::to_string(l) + "/";
        fn(prefix + "attention", layers[l].attention);
        fn(prefix + "neighbor_mix", layers[l].neighbor_mix);
        fn(prefix + "self_mix", layers[l].self_mix);
        fn(prefix + "edge_combine", layers[l].edge_combine);
        fn(prefix + "edge_to_node", layers[l].edge_to_node);
        fn(prefix + "node_self", layers[l].node_self);
        fn(prefix + "node_combine", layers[l].node_combine);
    }
    fn("q_out", q_out);
    fn("q_feature", q_feature);
}

void ParameterSet::for_each(
    const std::function<void(const std::string&, const Eigen::MatrixXd&)>& fn) const {
    auto& self = const_cast<ParameterSet&>(*this);
    self.for_each([&fn](const std::string& name, Eigen::MatrixXd& m) {
        fn(name, static_cast<const Eigen::MatrixXd&>(m));
    });
}

void ParameterSet::add_scaled(const ParameterSet& other, double factor) {
    for (size_t l = 0; l < layers.size(); ++l) {
        layers[l].attention += factor * other.layers[l].attention;
        layers[l].neighbor_mix += factor * other.layers[l].neighbor_mix;
        layers[l].self_mix += factor * other.layers[l].self_mix;
        layers[l].edge_combine += factor * other.layers[l].edge_combine;
        layers[l].edge_to_node += factor * other.layers[l].edge_to_node;
        layers[l].node_self += factor * other.layers[l].node_self;
        layers[l].node_combine += factor * other.layers[l].node_combine;
    }
    q_out += factor * other.q_out;
    q_feature += factor * other.q_feature;
}

double ParameterSet::squared_norm() const {
    double total = 0.0;
    for_each([&total](const std::string&, const Eigen::MatrixXd& m) { total += m.squaredNorm(); });
    return total;
}

bool ParameterSet::all_finite() const {
    bool ok = true;
    for_each([&ok](const std::string&, const Eigen::MatrixXd& m) { ok = ok && m.allFinite(); });
    return ok;
}

EmbeddingGraph EmbeddingGraph::build(const Hypernetwork& g) {
    EmbeddingGraph out;
    out.node_ids = g.nodes();
    out.edge_ids = g.hyperedges();
    out.node_row.assign(g.initial_node_count(), -1);
    for (int r = 0; r < static_cast<int>(out.node_ids.size()); ++r)
        out.node_row[out.node_ids[r]] = r;
    int edge_id_space = out.edge_ids.empty() ? 0 : out.edge_ids.back() + 1;
    out.edge_row.assign(edge_id_space, -1);
    for (int r = 0; r < static_cast<int>(out.edge_ids.size()); ++r)
        out.edge_row[out.edge_ids[r]] = r;

    out.members.resize(out.edge_ids.size());
    for (int r = 0; r < static_cast<int>(out.edge_ids.size()); ++r) {
        const auto& mem = g.members(out.edge_ids[r]);
        out.members[r].reserve(mem.size());
        for (int v : mem) out.members[r].push_back(out.node_row[v]);
    }

    out.node_edges.resize(out.node_ids.size());
    for (int r = 0; r < static_cast<int>(out.node_ids.size()); ++r) {
        for (int e : g.incident_edges(out.node_ids[r]))
            out.node_edges[r].push_back(out.edge_row[e]);
    }

    out.edge_neighbors.resize(out.edge_ids.size());
    for (int vr = 0; vr < static_cast<int>(out.node_ids.size()); ++vr) {
        const auto& es = out.node_edges[vr];
        for (size_t i = 0; i < es.size(); ++i) {
            for (size_t j = 0; j < es.size(); ++j) {
                if (i != j) out.edge_neighbors[es[i]].push_back(es[j]);
            }
        }
    }
    for (auto& nei : out.edge_neighbors) {
        std::sort(nei.begin(), nei.end());
        nei.erase(std::unique(nei.begin(), nei.end()), nei.end());
    }
    return out;
}

MergeResult merge_nodes(const Eigen::MatrixXd& x, const EmbeddingGraph& graph,
                        const Eigen::MatrixXd& attention) {
    int m = graph.edge_count();
    int d = static_cast<int>(x.cols());
    MergeResult out;
    out.y = Eigen::MatrixXd::Zero(m, d);
    out.alpha.resize(m);

    // attention logit per node, shared across the hyperedges containing it
    Eigen::VectorXd logits = x * attention.transpose();

    for (int e = 0; e < m; ++e) {
        const auto& mem = graph.members[e];
        if (mem.empty()) fail("empty-hyperedge", "cannot merge an empty hyperedge");
        double max_logit = logits(mem[0]);
        for (int v : mem) max_logit = std::max(max_logit, logits(v));
        Eigen::VectorXd w(mem.size());
        double total = 0.0;
        for (size_t k = 0; k < mem.size(); ++k) {
            w(static_cast<Eigen::Index>(k)) = std::exp(logits(mem[k]) - max_logit);
            total += w(static_cast<Eigen::Index>(k));
        }
        w /= total;
        for (size_t k = 0; k < mem.size(); ++k)
            out.y.row(e) += w(static_cast<Eigen::Index>(k)) * x.row(mem[k]);
        out.alpha[e] = std::move(w);
    }
    return out;
}

namespace {

std::vector<double> neighbor_inv_sqrt(const EmbeddingGraph& graph) {
    std::vector<double> inv(graph.edge_count(), 0.0);
    for (int e = 0; e < graph.edge_count(); ++e) {
        size_t k = graph.edge_neighbors[e].size();
        if (k > 0) inv[e] = 1.0 / std::sqrt(static_cast<double>(k));
    }
    return inv;
}

}  // namespace

EdgeAggregateResult hyperedge_aggregate(const Eigen::MatrixXd& y_merged,
                                        const EmbeddingGraph& graph, const LayerParams& p) {
    int m = graph.edge_count();
    int din = static_cast<int>(y_merged.cols());
    EdgeAggregateResult out;
    out.y_neighbor = Eigen::MatrixXd::Zero(m, din);
    std::vector<double> inv = neighbor_inv_sqrt(graph);
    for (int e = 0; e < m; ++e) {
        for (int o : graph.edge_neighbors[e])
            out.y_neighbor.row(e) += inv[e] * inv[o] * y_merged.row(o);
    }
    Eigen::MatrixXd a = out.y_neighbor * p.neighbor_mix.transpose();
    Eigen::MatrixXd b = y_merged * p.self_mix.transpose();
    int dout = static_cast<int>(a.cols());
    out.pre = a * p.edge_combine.topRows(dout) + b * p.edge_combine.bottomRows(dout);
    out.y_out = out.pre.cwiseMax(0.0);
    return out;
}

NodeAggregateResult node_aggregate(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y_out,
                                   const EmbeddingGraph& graph, const LayerParams& p) {
    int n = graph.node_count();
    int dout = static_cast<int>(y_out.cols());
    NodeAggregateResult out;
    out.node_sum = Eigen::MatrixXd::Zero(n, dout);
    for (int v = 0; v < n; ++v) {
        for (int e : graph.node_edges[v]) out.node_sum.row(v) += y_out.row(e);
    }
    // row-at-a-time with the same vector expressions the virtual-node chain
    // uses, so a virtual node with identical inputs reproduces a real node's
    // update bit for bit
    out.pre.resize(n, dout);
    for (int v = 0; v < n; ++v) {
        Eigen::VectorXd upper = p.edge_to_node * out.node_sum.row(v).transpose();
        Eigen::VectorXd lower = p.node_self * x.row(v).transpose();
        out.pre.row(v) = (p.node_combine.topRows(dout).transpose() * upper +
                          p.node_combine.bottomRows(dout).transpose() * lower)
                             .transpose();
    }
    out.x_out = out.pre.cwiseMax(0.0);
    return out;
}

Embedding embed(const Hypernetwork& g, const ParameterSet& params) {
    if (g.empty()) fail("empty-hypernetwork", "cannot embed an empty hypernetwork");
    Embedding fwd;
    fwd.graph = EmbeddingGraph::build(g);
    fwd.structure_hash = g.fingerprint();
    fwd.x0 = Eigen::MatrixXd::Ones(fwd.graph.node_count(), 1);
    fwd.layers.resize(params.dims.depth);

    const Eigen::MatrixXd* x = &fwd.x0;
    for (int l = 0; l < params.dims.depth; ++l) {
        LayerCache& cache = fwd.layers[l];
        cache.x_in = *x;
        MergeResult merged = merge_nodes(cache.x_in, fwd.graph, params.layers[l].attention);
        cache.y_merged = std::move(merged.y);
        cache.alpha = std::move(merged.alpha);
        EdgeAggregateResult ea = hyperedge_aggregate(cache.y_merged, fwd.graph, params.layers[l]);
        cache.y_neighbor = std::move(ea.y_neighbor);
        cache.edge_pre = std::move(ea.pre);
        cache.y_out = std::move(ea.y_out);
        NodeAggregateResult na =
            node_aggregate(cache.x_in, cache.y_out, fwd.graph, params.layers[l]);
        cache.node_sum = std::move(na.node_sum);
        cache.node_pre = std::move(na.pre);
        cache.x_out = std::move(na.x_out);
        x = &cache.x_out;
    }
    return fwd;
}

const Eigen::MatrixXd& Embedding::node_embeddings() const {
    return layers.empty() ? x0 : layers.back().x_out;
}

const Eigen::MatrixXd& Embedding::hyperedge_embeddings() const {
    static const Eigen::MatrixXd kEmpty;
    return layers.empty() ? kEmpty : layers.back().y_out;
}

StateCache state_embed(const Embedding& fwd, const ParameterSet& params) {
    StateCache state;
    int depth = static_cast<int>(fwd.layers.size());
    state.x.resize(depth + 1);
    state.edge_sum.resize(depth);
    state.pre.resize(depth);
    state.x[0] = Eigen::VectorXd::Ones(1);
    for (int l = 0; l < depth; ++l) {
        const LayerCache& cache = fwd.layers[l];
        const LayerParams& p = params.layers[l];
        int dout = static_cast<int>(cache.y_out.cols());
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(dout);
        for (Eigen::Index e = 0; e < cache.y_out.rows(); ++e)
            sum += cache.y_out.row(e).transpose();
        state.edge_sum[l] = sum;
        Eigen::VectorXd upper = p.edge_to_node * sum;
        Eigen::VectorXd lower = p.node_self * state.x[l];
        state.pre[l] = p.node_combine.topRows(dout).transpose() * upper +
                       p.node_combine.bottomRows(dout).transpose() * lower;
        state.x[l + 1] = state.pre[l].cwiseMax(0.0);
    }
    return state;
}

namespace {

double q_single(const Eigen::RowVectorXd& action_row, const Eigen::VectorXd& state,
                const ParameterSet& params) {
    double c = (action_row * params.q_feature)(0);
    Eigen::VectorXd h = (c * state).cwiseMax(0.0);
    return (params.q_out.transpose() * h)(0);
}

}  // namespace

Eigen::VectorXd q_values(const Embedding& fwd, const StateCache& state,
                         const std::vector<int>& candidate_nodes, const ParameterSet& params) {
    const Eigen::MatrixXd& x = fwd.node_embeddings();
    Eigen::VectorXd out(candidate_nodes.size());
    for (size_t i = 0; i < candidate_nodes.size(); ++i) {
        int id = candidate_nodes[i];
        if (id < 0 || id >= static_cast<int>(fwd.graph.node_row.size()) ||
            fwd.graph.node_row[id] < 0)
            fail("node-not-found", "q value requested for a node outside the embedding");
        out(static_cast<Eigen::Index>(i)) =
            q_single(x.row(fwd.graph.node_row[id]), state.state(), params);
    }
    return out;
}

std::vector<std::pair<int, double>> q_scores_all(const Hypernetwork& g,
                                                 const ParameterSet& params) {
    Embedding fwd = embed(g, params);
    StateCache state = state_embed(fwd, params);
    Eigen::VectorXd q = q_values(fwd, state, fwd.graph.node_ids, params);
    std::vector<std::pair<int, double>> out;
    out.reserve(fwd.graph.node_ids.size());
    for (size_t i = 0; i < fwd.graph.node_ids.size(); ++i)
        out.emplace_back(fwd.graph.node_ids[i], q(static_cast<Eigen::Index>(i)));
    return out;
}

void gradients(const Embedding& fwd, const StateCache& state, const BackwardSeeds& seeds,
               const ParameterSet& params, const Hypernetwork& current, ParameterSet& accum) {
    if (current.fingerprint() != fwd.structure_hash)
        fail("stale-cache", "hypernetwork changed since the forward pass");

    int depth = static_cast<int>(fwd.layers.size());
    int n = fwd.graph.node_count();
    int m = fwd.graph.edge_count();
    int d_final = depth == 0 ? 1 : static_cast<int>(fwd.layers.back().x_out.cols());

    Eigen::MatrixXd d_x = Eigen::MatrixXd::Zero(n, d_final);
    Eigen::VectorXd d_state = Eigen::VectorXd::Zero(d_final);

    // q head
    if (seeds.dq != 0.0) {
        if (seeds.action_node < 0) fail("invalid-config", "q seed without an action node");
        int row = fwd.graph.node_row[seeds.action_node];
        if (row < 0) fail("node-not-found", "action node not embedded");
        Eigen::RowVectorXd a_row = fwd.node_embeddings().row(row);
        const Eigen::VectorXd& xs = state.state();
        double c = (a_row * params.q_feature)(0);
        Eigen::VectorXd h_pre = c * xs;
        Eigen::ArrayXd mask = (h_pre.array() > 0.0).cast<double>();
        accum.q_out += seeds.dq * h_pre.cwiseMax(0.0);
        Eigen::VectorXd g = seeds.dq * (params.q_out.array() * mask).matrix().col(0);
        double dc = g.dot(xs);
        d_state += c * g;
        accum.q_feature += dc * a_row.transpose();
        d_x.row(row) += dc * params.q_feature.transpose();
    }

    // virtual-node chain, stashing per-layer contributions to d y_out
    std::vector<Eigen::VectorXd> d_y_state(depth);
    {
        Eigen::VectorXd dxs = d_state;
        for (int l = depth - 1; l >= 0; --l) {
            const LayerParams& p = params.layers[l];
            int dout = static_cast<int>(state.pre[l].size());
            Eigen::VectorXd d_pre =
                (dxs.array() * (state.pre[l].array() > 0.0).cast<double>()).matrix();
            Eigen::VectorXd upper = p.edge_to_node * state.edge_sum[l];
            Eigen::VectorXd lower = p.node_self * state.x[l];
            accum.layers[l].node_combine.topRows(dout) += upper * d_pre.transpose();
            accum.layers[l].node_combine.bottomRows(dout) += lower * d_pre.transpose();
            Eigen::VectorXd d_upper = p.node_combine.topRows(dout) * d_pre;
            Eigen::VectorXd d_lower = p.node_combine.bottomRows(dout) * d_pre;
            accum.layers[l].edge_to_node += d_upper * state.edge_sum[l].transpose();
            d_y_state[l] = p.edge_to_node.transpose() * d_upper;
            accum.layers[l].node_self += d_lower * state.x[l].transpose();
            dxs = p.node_self.transpose() * d_lower;
        }
    }

    // aggregation layers, top to bottom
    for (int l = depth - 1; l >= 0; --l) {
        const LayerCache& cache = fwd.layers[l];
        const LayerParams& p = params.layers[l];
        LayerParams& gp = accum.layers[l];
        int dout = static_cast<int>(cache.y_out.cols());

        Eigen::MatrixXd d_y_out = Eigen::MatrixXd::Zero(m, dout);
        if (l == depth - 1 && seeds.d_y_final.size() > 0) d_y_out += seeds.d_y_final;
        if (d_y_state[l].size() > 0) d_y_out.rowwise() += d_y_state[l].transpose();

        // node-level update
        {
            Eigen::MatrixXd d_pre = (d_x.array() * relu_mask(cache.node_pre)).matrix();
            Eigen::MatrixXd upper = cache.node_sum * p.edge_to_node.transpose();
            Eigen::MatrixXd lower = cache.x_in * p.node_self.transpose();
            gp.node_combine.topRows(dout) += upper.transpose() * d_pre;
            gp.node_combine.bottomRows(dout) += lower.transpose() * d_pre;
            Eigen::MatrixXd d_upper = d_pre * p.node_combine.topRows(dout).transpose();
            Eigen::MatrixXd d_lower = d_pre * p.node_combine.bottomRows(dout).transpose();
            gp.edge_to_node += d_upper.transpose() * cache.node_sum;
            Eigen::MatrixXd d_sum = d_upper * p.edge_to_node;
            for (int v = 0; v < n; ++v)
                for (int e : fwd.graph.node_edges[v]) d_y_out.row(e) += d_sum.row(v);
            gp.node_self += d_lower.transpose() * cache.x_in;
            d_x = d_lower * p.node_self;  // becomes d x_in, grown below by merge backward
        }

        // hyperedge-level update
        Eigen::MatrixXd d_y_merged;
        {
            Eigen::MatrixXd d_pre = (d_y_out.array() * relu_mask(cache.edge_pre)).matrix();
            Eigen::MatrixXd a = cache.y_neighbor * p.neighbor_mix.transpose();
            Eigen::MatrixXd b = cache.y_merged * p.self_mix.transpose();
            gp.edge_combine.topRows(dout) += a.transpose() * d_pre;
            gp.edge_combine.bottomRows(dout) += b.transpose() * d_pre;
            Eigen::MatrixXd d_a = d_pre * p.edge_combine.topRows(dout).transpose();
            Eigen::MatrixXd d_b = d_pre * p.edge_combine.bottomRows(dout).transpose();
            gp.neighbor_mix += d_a.transpose() * cache.y_neighbor;
            Eigen::MatrixXd d_nei = d_a * p.neighbor_mix;
            gp.self_mix += d_b.transpose() * cache.y_merged;
            d_y_merged = d_b * p.self_mix;
            std::vector<double> inv = neighbor_inv_sqrt(fwd.graph);
            for (int e = 0; e < m; ++e)
                for (int o : fwd.graph.edge_neighbors[e])
                    d_y_merged.row(o) += inv[e] * inv[o] * d_nei.row(e);
        }

        // attention merge
        for (int e = 0; e < m; ++e) {
            const auto& mem = fwd.graph.members[e];
            const Eigen::VectorXd& alpha = cache.alpha[e];
            Eigen::RowVectorXd g = d_y_merged.row(e);
            Eigen::VectorXd d_alpha(mem.size());
            double weighted = 0.0;
            for (size_t k = 0; k < mem.size(); ++k) {
                Eigen::Index ki = static_cast<Eigen::Index>(k);
                d_alpha(ki) = g.dot(cache.x_in.row(mem[k]));
                d_x.row(mem[k]) += alpha(ki) * g;
                weighted += alpha(ki) * d_alpha(ki);
            }
            for (size_t k = 0; k < mem.size(); ++k) {
                Eigen::Index ki = static_cast<Eigen::Index>(k);
                double d_logit = alpha(ki) * (d_alpha(ki) - weighted);
                gp.attention += d_logit * cache.x_in.row(mem[k]);
                d_x.row(mem[k]) += d_logit * p.attention;
            }
        }
    }
}

}  // namespace hyperdm
