#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hyperdm/hypergraph.hpp"
#include "hyperdm/rng.hpp"

namespace hyperdm {

class Rng;

// Layer layout of the two-level embedding: depth aggregation layers of
// width-dimensional embeddings on top of the scalar all-ones input feature.
struct EmbedDims {
    int depth = 3;
    int width = 64;

    int dim_at(int layer) const { return layer == 0 ? 1 : width; }
    int final_dim() const { return depth == 0 ? 1 : width; }

    bool operator==(const EmbedDims&) const = default;
};

// Per-layer trainable weights. Names follow the role each matrix plays in
// the aggregation, not the tensor algebra:
//   attention      1 x d_l        scores node contributions inside a hyperedge
//   neighbor_mix   d_{l+1} x d_l  transforms the normalized neighbor sum
//   self_mix       d_{l+1} x d_l  transforms the hyperedge's own embedding
//   edge_combine   2d_{l+1} x d_{l+1}  fuses [neighbor || self] for hyperedges
//   edge_to_node   d_{l+1} x d_{l+1}   transforms incident-hyperedge sums
//   node_self      d_{l+1} x d_l       transforms the node's own embedding
//   node_combine   2d_{l+1} x d_{l+1}  fuses [hyperedges || self] for nodes
struct LayerParams {
    Eigen::MatrixXd attention;
    Eigen::MatrixXd neighbor_mix;
    Eigen::MatrixXd self_mix;
    Eigen::MatrixXd edge_combine;
    Eigen::MatrixXd edge_to_node;
    Eigen::MatrixXd node_self;
    Eigen::MatrixXd node_combine;
};

// Full trainable state: the per-layer aggregation weights plus the two
// q-head vectors (q_out scores the fused state-action feature, q_feature
// projects the action embedding to a scalar).
struct ParameterSet {
    EmbedDims dims;
    std::vector<LayerParams> layers;
    Eigen::MatrixXd q_out;      // d_L x 1
    Eigen::MatrixXd q_feature;  // d_L x 1

    // Entries drawn uniformly in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
    static ParameterSet random(EmbedDims dims, Rng& rng);
    static ParameterSet zeros(EmbedDims dims);

    // Canonical named visitation, the basis of checkpoints, SGD updates and
    // finite-difference sweeps.
    void for_each(const std::function<void(const std::string&, Eigen::MatrixXd&)>& fn);
    void for_each(const std::function<void(const std::string&, const Eigen::MatrixXd&)>& fn) const;

    void add_scaled(const ParameterSet& other, double factor);  // this += factor * other
    double squared_norm() const;
    bool all_finite() const;
};

// Compact row-indexed view of the alive part of a hypernetwork. Rows are
// assigned in ascending id order; member lists keep the hypernetwork's
// construction order.
struct EmbeddingGraph {
    std::vector<int> node_ids;  // row -> node id
    std::vector<int> edge_ids;  // row -> hyperedge id
    std::vector<int> node_row;  // node id -> row or -1
    std::vector<int> edge_row;  // hyperedge id -> row or -1
    std::vector<std::vector<int>> members;        // edge row -> node rows
    std::vector<std::vector<int>> edge_neighbors; // edge row -> edge rows sharing a node
    std::vector<std::vector<int>> node_edges;     // node row -> edge rows, ascending

    int node_count() const { return static_cast<int>(node_ids.size()); }
    int edge_count() const { return static_cast<int>(edge_ids.size()); }

    static EmbeddingGraph build(const Hypernetwork& g);
};

// Everything the backward pass needs to replay one aggregation layer.
struct LayerCache {
    Eigen::MatrixXd x_in;        // |V| x d_l
    Eigen::MatrixXd y_merged;    // |E| x d_l      attention-merged node embeddings
    std::vector<Eigen::VectorXd> alpha;  // per edge, attention over members
    Eigen::MatrixXd y_neighbor;  // |E| x d_l      degree-normalized neighbor sums
    Eigen::MatrixXd edge_pre;    // |E| x d_{l+1}  pre-activation of the edge update
    Eigen::MatrixXd y_out;       // |E| x d_{l+1}
    Eigen::MatrixXd node_sum;    // |V| x d_{l+1}  sums of incident y_out rows
    Eigen::MatrixXd node_pre;    // |V| x d_{l+1}
    Eigen::MatrixXd x_out;       // |V| x d_{l+1}
};

// Forward pass output: per-layer caches plus the final embeddings.
struct Embedding {
    EmbeddingGraph graph;
    Eigen::MatrixXd x0;              // |V| x 1 ones
    std::vector<LayerCache> layers;  // depth entries
    uint64_t structure_hash = 0;

    const Eigen::MatrixXd& node_embeddings() const;
    // Final hyperedge embeddings; empty matrix when depth == 0.
    const Eigen::MatrixXd& hyperedge_embeddings() const;
};

// Virtual-node chain: a read-only node incident to every hyperedge, pushed
// through the node-level update at each layer with the shared weights. It
// never enters the attention merge or the hyperedge neighborhoods, so real
// embeddings are unchanged.
struct StateCache {
    std::vector<Eigen::VectorXd> x;         // depth+1 entries, x[0] = ones(1)
    std::vector<Eigen::VectorXd> edge_sum;  // per layer, sum of all y_out rows
    std::vector<Eigen::VectorXd> pre;       // per layer

    const Eigen::VectorXd& state() const { return x.back(); }
};

struct MergeResult {
    Eigen::MatrixXd y;  // |E| x d_l
    std::vector<Eigen::VectorXd> alpha;
};

// Attention-weighted merge of member embeddings into hyperedge embeddings.
// Errors with "empty-hyperedge" if the graph contains one.
MergeResult merge_nodes(const Eigen::MatrixXd& x, const EmbeddingGraph& graph,
                        const Eigen::MatrixXd& attention);

struct EdgeAggregateResult {
    Eigen::MatrixXd y_neighbor;
    Eigen::MatrixXd pre;
    Eigen::MatrixXd y_out;
};

// Hyperedge-level aggregation: normalized neighbor sum and self embedding,
// mixed and fused through a ReLU. A hyperedge with no neighbors uses a zero
// neighbor term.
EdgeAggregateResult hyperedge_aggregate(const Eigen::MatrixXd& y_merged,
                                        const EmbeddingGraph& graph, const LayerParams& p);

struct NodeAggregateResult {
    Eigen::MatrixXd node_sum;
    Eigen::MatrixXd pre;
    Eigen::MatrixXd x_out;
};

// Node-level aggregation from the hyperedges containing each node. A node
// in no hyperedge uses a zero hyperedge term.
NodeAggregateResult node_aggregate(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y_out,
                                   const EmbeddingGraph& graph, const LayerParams& p);

// Full forward pass; errors with "empty-hypernetwork" when no nodes remain.
Embedding embed(const Hypernetwork& g, const ParameterSet& params);

StateCache state_embed(const Embedding& fwd, const ParameterSet& params);

// q(s, a) for each candidate node id.
Eigen::VectorXd q_values(const Embedding& fwd, const StateCache& state,
                         const std::vector<int>& candidate_nodes, const ParameterSet& params);

// Convenience: embed, state-embed, and score every alive node (ascending id
// order, paired with the ids).
std::vector<std::pair<int, double>> q_scores_all(const Hypernetwork& g,
                                                 const ParameterSet& params);

// Loss gradient seeds entering the fixed computation graph: d loss / d q for
// one action, and/or a gradient on the final hyperedge embeddings.
struct BackwardSeeds {
    double dq = 0.0;
    int action_node = -1;           // node id; required when dq != 0
    Eigen::MatrixXd d_y_final;      // |E| x d_L or empty
};

// Exact reverse-mode gradients through the cached forward pass, accumulated
// into accum (which must be zeros(dims) or a running sum). The current
// hypernetwork is checked against the forward fingerprint; a topology change
// since the forward errors with "stale-cache". ReLU subgradient at 0 is 0.
void gradients(const Embedding& fwd, const StateCache& state, const BackwardSeeds& seeds,
               const ParameterSet& params, const Hypernetwork& current, ParameterSet& accum);

}  // namespace hyperdm
