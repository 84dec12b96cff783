#include "hyperdm/synthgen.hpp"

#include <algorithm>
#include <deque>

#include "hyperdm/error.hpp"

namespace hyperdm {

namespace {

void validate(const GenConfig& cfg) {
    if (cfg.n_min < 1 || cfg.n_min > cfg.n_max) fail("invalid-config", "need 1 <= n_min <= n_max");
    if (cfg.p_burn < 0.0 || cfg.p_burn > 1.0) fail("invalid-config", "p_burn outside [0,1]");
    if (cfg.p_expand < 0.0 || cfg.p_expand > 1.0) fail("invalid-config", "p_expand outside [0,1]");
}

// Incremental adjacency kept alongside the edge list during growth.
struct Growth {
    std::vector<std::vector<int>> edges;
    std::vector<std::vector<int>> neighbors;  // sorted distinct co-members

    void add_edge(std::vector<int> mem) {
        for (size_t i = 0; i < mem.size(); ++i) {
            for (size_t j = 0; j < mem.size(); ++j) {
                if (i == j) continue;
                auto& adj = neighbors[mem[i]];
                auto it = std::lower_bound(adj.begin(), adj.end(), mem[j]);
                if (it == adj.end() || *it != mem[j]) adj.insert(it, mem[j]);
            }
        }
        edges.push_back(std::move(mem));
    }

    // Burn outward from the ambassador; returns the burned set in burn order
    // (ambassador first).
    std::vector<int> burn(int ambassador, double p_burn, Rng& rng) const {
        std::vector<int> burned = {ambassador};
        std::vector<uint8_t> is_burned(neighbors.size(), 0);
        is_burned[ambassador] = 1;
        std::deque<int> frontier = {ambassador};
        while (!frontier.empty() && static_cast<int>(burned.size()) < kBurnCap) {
            int u = frontier.front();
            frontier.pop_front();
            for (int w : neighbors[u]) {
                if (is_burned[w]) continue;
                if (!rng.bernoulli(p_burn)) continue;
                is_burned[w] = 1;
                burned.push_back(w);
                frontier.push_back(w);
                if (static_cast<int>(burned.size()) >= kBurnCap) break;
            }
        }
        return burned;
    }
};

}  // namespace

Hypernetwork generate(const GenConfig& cfg) {
    validate(cfg);
    Rng rng(cfg.seed);
    int target = static_cast<int>(rng.uniform_int(cfg.n_min, cfg.n_max));

    Growth g;
    g.neighbors.resize(target);
    g.add_edge({0});
    for (int v = 1; v < target; ++v) {
        int ambassador = static_cast<int>(rng.uniform_int(0, v - 1));
        std::vector<int> mem = {v};
        for (int u : g.burn(ambassador, cfg.p_burn, rng)) mem.push_back(u);
        g.add_edge(std::move(mem));
        if (rng.bernoulli(cfg.p_expand)) {
            int second = static_cast<int>(rng.uniform_int(0, v - 1));
            std::vector<int> extra = {v};
            for (int u : g.burn(second, cfg.p_burn, rng)) extra.push_back(u);
            g.add_edge(std::move(extra));
        }
    }
    return Hypernetwork(target, std::move(g.edges));
}

std::vector<Hypernetwork> generate_batch(const GenConfig& cfg, int k) {
    validate(cfg);
    if (k < 1) fail("invalid-config", "batch size must be >= 1");
    std::vector<Hypernetwork> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        GenConfig sub = cfg;
        sub.seed = derive_seed(cfg.seed, static_cast<uint64_t>(i));
        out.push_back(generate(sub));
    }
    return out;
}

}  // namespace hyperdm
