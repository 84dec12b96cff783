#pragma once

#include <cstdint>
#include <vector>

#include "hyperdm/baselines.hpp"
#include "hyperdm/hypergraph.hpp"

namespace hyperdm {

// Discrete-time SIR on the pairwise contacts of a contact hypernetwork.
// Infection seeds are the members of the earliest contact group (the
// hyperedge with the smallest id), minus any immunized nodes.
struct SirConfig {
    double beta = 0.1;  // per-contact per-step infection probability
    double mu = 0.1;    // per-step recovery probability
    int repetitions = 100;
    std::vector<double> immune_ratios = {0.0, 0.05, 0.10, 0.15, 0.20};
    uint64_t seed = 0;
    double rank_batch_frac = 0.01;  // dismantling protocol used to rank nodes
};

// Mean over repetitions of (ever-infected count) / |V|. Each step every
// infected node independently infects each susceptible neighbor (sharing at
// least one hyperedge) with probability beta, then recovers with probability
// mu; an infected node can transmit on the step it recovers. Immune nodes
// never enter the infected state. Repetition i draws from substream
// derive_seed(base_seed, i).
double sir_simulate(const Hypernetwork& contact, const std::vector<int>& immune_set,
                    const SirConfig& cfg, uint64_t base_seed);

// Per-repetition final infection rates (sir_simulate is their mean).
std::vector<double> sir_rates(const Hypernetwork& contact, const std::vector<int>& immune_set,
                              const SirConfig& cfg, uint64_t base_seed);

// For each immune ratio: immunize the top ceil(ratio * |V|) nodes in the
// strategy's dismantling order, then simulate. The per-ratio seed substream
// is independent of the strategy, so the ratio-0 row is identical across
// strategies.
struct ContainmentRow {
    std::vector<double> ratios;
    std::vector<double> mean_infection_rate;
};

ContainmentRow containment_table(const Hypernetwork& contact, const Strategy& strategy,
                                 const SirConfig& cfg);

}  // namespace hyperdm
