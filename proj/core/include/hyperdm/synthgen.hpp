#pragma once

#include <cstdint>
#include <vector>

#include "hyperdm/hypergraph.hpp"
#include "hyperdm/rng.hpp"

namespace hyperdm {

// Forest-fire-style growth configuration. Defaults follow the training
// setup: 30-50 nodes, burning and expanding probabilities both 0.1.
struct GenConfig {
    int n_min = 30;
    int n_max = 50;
    double p_burn = 0.1;
    double p_expand = 0.1;
    uint64_t seed = 0;
};

// Grow one connected hypernetwork. Each new node picks a uniform ambassador
// among the existing nodes, burns outward from it (every burned node's
// neighbors catch fire independently with probability p_burn, at most
// kBurnCap nodes per fire), and forms a hyperedge of itself plus the burned
// set; with probability p_expand a second hyperedge is formed from a fresh
// fire. Deterministic given the seed. Errors with "invalid-config" on
// degenerate configs.
Hypernetwork generate(const GenConfig& cfg);

inline constexpr int kBurnCap = 15;

// k independent instances from seed-derived substreams: element i equals
// generate() with seed derive_seed(cfg.seed, i), so different batch sizes
// share a common prefix.
std::vector<Hypernetwork> generate_batch(const GenConfig& cfg, int k);

}  // namespace hyperdm
