#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperdm/hypergraph.hpp"

namespace hyperdm {

struct ParameterSet;

// Dismantling strategies. HD/HDA/CI score nodes on the 2-section graph,
// HHD/HHDA on the hypernetwork itself; the *A variants rescore the residual
// between removal batches. Agent scores with a trained q-network; Random is
// a floor for comparisons.
enum class StrategyKind { HD, HDA, HHD, HHDA, CI, Agent, Random };

struct Strategy {
    StrategyKind kind = StrategyKind::HHDA;
    int ci_radius = 2;
    const ParameterSet* agent_params = nullptr;  // required for Agent
    uint64_t random_seed = 0;                    // substream for Random

    std::string name() const;
};

StrategyKind strategy_from_name(const std::string& name);
std::string strategy_name(StrategyKind kind);

// Scores computed once on the initial structure, returned as a full ranking
// (descending score, ties by smallest node id). Valid kinds: HD, HHD.
std::vector<int> static_order(const Hypernetwork& g, StrategyKind kind);

// Scores recomputed on the residual. Valid kinds: HD, HDA, HHD, HHDA, CI.
// Indexed by node id; removed nodes hold 0 (callers only read alive ids).
std::vector<double> residual_scores(const Hypernetwork& g, StrategyKind kind, int ci_radius);

// Argmax of residual_scores, ties by smallest node id. Valid kinds: HDA,
// HHDA, CI. Errors with "no-actions" on an empty residual.
int adaptive_next(const Hypernetwork& residual, StrategyKind kind, int ci_radius = 2);

// Collective influence at the given radius on a simple graph:
// (deg(v)-1) * sum of (deg(u)-1) over nodes u exactly radius hops away.
double collective_influence(const SimpleGraph& graph, int v, int radius);

}  // namespace hyperdm
