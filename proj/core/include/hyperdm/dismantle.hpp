#pragma once

#include <string>
#include <vector>

#include "hyperdm/baselines.hpp"
#include "hyperdm/hypergraph.hpp"

namespace hyperdm {

// Record of one dismantling run: nodes removed per batch and the residual
// connectivity after each batch, normalized by the initial connectivity.
struct DismantleTrace {
    std::string strategy;
    double batch_frac = 0.0;
    std::vector<std::vector<int>> removed;              // per batch
    std::vector<double> normalized_connectivity;        // per batch, non-increasing

    int batches() const { return static_cast<int>(removed.size()); }
    std::vector<int> removal_order() const;             // flattened
};

// Batch-removal protocol: each batch removes ceil(batch_frac * |V0|) nodes
// chosen by the strategy (adaptive strategies rescore between batches, not
// within), until every node is removed or max_batches is reached
// (max_batches = 0 means unlimited).
DismantleTrace dismantle(const Hypernetwork& g, const Strategy& strategy, double batch_frac,
                         int max_batches = 0);

// Accumulated normalized connectivity: the mean of the recorded normalized
// connectivity values. Lower is better. Errors with "empty-trace".
double anc(const DismantleTrace& trace);

}  // namespace hyperdm
