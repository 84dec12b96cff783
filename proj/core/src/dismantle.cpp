#include "hyperdm/dismantle.hpp"

#include <algorithm>
#include <cmath>

#include "hyperdm/embedding.hpp"
#include "hyperdm/error.hpp"
#include "hyperdm/rng.hpp"

namespace hyperdm {

std::vector<int> DismantleTrace::removal_order() const {
    std::vector<int> out;
    for (const auto& batch : removed) out.insert(out.end(), batch.begin(), batch.end());
    return out;
}

namespace {

// Top-k alive nodes by (score descending, id ascending).
std::vector<int> top_by_score(const Hypernetwork& g, const std::vector<double>& scores, int k) {
    std::vector<int> ids = g.nodes();
    k = std::min<int>(k, static_cast<int>(ids.size()));
    std::partial_sort(ids.begin(), ids.begin() + k, ids.end(), [&scores](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    ids.resize(k);
    return ids;
}

std::vector<int> random_batch(const Hypernetwork& g, int k, Rng& rng) {
    std::vector<int> ids = g.nodes();
    k = std::min<int>(k, static_cast<int>(ids.size()));
    for (int i = 0; i < k; ++i) {
        int j = static_cast<int>(rng.uniform_int(i, static_cast<int>(ids.size()) - 1));
        std::swap(ids[i], ids[j]);
    }
    ids.resize(k);
    return ids;
}

}  // namespace

DismantleTrace dismantle(const Hypernetwork& g, const Strategy& strategy, double batch_frac,
                         int max_batches) {
    if (g.empty()) fail("empty-hypernetwork", "nothing to dismantle");
    if (!(batch_frac > 0.0 && batch_frac <= 1.0))
        fail("invalid-config", "batch fraction outside (0,1]");
    if (strategy.kind == StrategyKind::Agent && strategy.agent_params == nullptr)
        fail("invalid-config", "agent strategy needs a parameter set");

    int n0 = g.node_count();
    double c0 = connectivity(g, n0);
    int batch_size = static_cast<int>(std::ceil(batch_frac * n0));

    DismantleTrace trace;
    trace.strategy = strategy.name();
    trace.batch_frac = batch_frac;

    std::vector<int> order;  // static strategies only
    size_t order_pos = 0;
    if (strategy.kind == StrategyKind::HD || strategy.kind == StrategyKind::HHD)
        order = static_order(g, strategy.kind);

    Rng rng(derive_seed(strategy.random_seed, Stream::Dismantle));
    Hypernetwork cur = g;
    while (cur.node_count() > 0) {
        if (max_batches > 0 && trace.batches() >= max_batches) break;
        std::vector<int> batch;
        switch (strategy.kind) {
            case StrategyKind::HD:
            case StrategyKind::HHD:
                while (static_cast<int>(batch.size()) < batch_size && order_pos < order.size())
                    batch.push_back(order[order_pos++]);
                break;
            case StrategyKind::HDA:
            case StrategyKind::HHDA:
            case StrategyKind::CI:
                batch = top_by_score(cur, residual_scores(cur, strategy.kind, strategy.ci_radius),
                                     batch_size);
                break;
            case StrategyKind::Agent: {
                std::vector<double> scores(cur.initial_node_count(), 0.0);
                for (const auto& [id, q] : q_scores_all(cur, *strategy.agent_params))
                    scores[id] = q;
                batch = top_by_score(cur, scores, batch_size);
                break;
            }
            case StrategyKind::Random:
                batch = random_batch(cur, batch_size, rng);
                break;
        }
        for (int v : batch) cur.remove_node_in_place(v);
        trace.removed.push_back(std::move(batch));
        trace.normalized_connectivity.push_back(
            cur.empty() ? 0.0 : connectivity(cur, n0) / c0);
    }
    return trace;
}

double anc(const DismantleTrace& trace) {
    if (trace.normalized_connectivity.empty()) fail("empty-trace", "trace has no batches");
    double total = 0.0;
    for (double c : trace.normalized_connectivity) total += c;
    return total / static_cast<double>(trace.normalized_connectivity.size());
}

}  // namespace hyperdm
