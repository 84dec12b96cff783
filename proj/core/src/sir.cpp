#include "hyperdm/sir.hpp"

#include <algorithm>
#include <cmath>

#include "hyperdm/dismantle.hpp"
#include "hyperdm/error.hpp"
#include "hyperdm/rng.hpp"

namespace hyperdm {

namespace {

enum class State : uint8_t { Susceptible, Infected, Recovered };

int run_once(const SimpleGraph& contacts, const std::vector<int>& seeds,
             const std::vector<uint8_t>& immune, double beta, double mu, Rng& rng) {
    std::vector<State> state(contacts.adj.size(), State::Susceptible);
    std::vector<int> infected;
    for (int v : seeds) {
        state[v] = State::Infected;
        infected.push_back(v);
    }
    int ever = static_cast<int>(infected.size());

    while (!infected.empty()) {
        std::vector<int> fresh;
        for (int i : infected) {
            for (int u : contacts.adj[i]) {
                if (state[u] != State::Susceptible || immune[u]) continue;
                if (rng.bernoulli(beta)) {
                    state[u] = State::Infected;
                    fresh.push_back(u);
                }
            }
        }
        std::vector<int> still;
        for (int i : infected) {
            if (rng.bernoulli(mu))
                state[i] = State::Recovered;
            else
                still.push_back(i);
        }
        ever += static_cast<int>(fresh.size());
        still.insert(still.end(), fresh.begin(), fresh.end());
        infected = std::move(still);
    }
    return ever;
}

}  // namespace

std::vector<double> sir_rates(const Hypernetwork& contact, const std::vector<int>& immune_set,
                              const SirConfig& cfg, uint64_t base_seed) {
    if (contact.empty()) fail("empty-hypernetwork", "no contact network");
    if (cfg.beta < 0.0 || cfg.beta > 1.0 || cfg.mu < 0.0 || cfg.mu > 1.0)
        fail("invalid-config", "probabilities outside [0,1]");

    std::vector<uint8_t> immune(contact.initial_node_count(), 0);
    for (int v : immune_set) {
        if (!contact.has_node(v)) fail("node-not-found", "immune node outside the network");
        immune[v] = 1;
    }

    std::vector<int> edges = contact.hyperedges();
    if (edges.empty()) fail("empty-hypernetwork", "contact network has no groups");
    std::vector<int> seeds;
    for (int v : contact.members(edges.front()))
        if (!immune[v]) seeds.push_back(v);

    SimpleGraph contacts = two_section(contact);

    std::vector<double> rates;
    rates.reserve(cfg.repetitions);
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        Rng rng(derive_seed(base_seed, static_cast<uint64_t>(rep)));
        int ever = run_once(contacts, seeds, immune, cfg.beta, cfg.mu, rng);
        rates.push_back(static_cast<double>(ever) / static_cast<double>(contact.node_count()));
    }
    return rates;
}

double sir_simulate(const Hypernetwork& contact, const std::vector<int>& immune_set,
                    const SirConfig& cfg, uint64_t base_seed) {
    std::vector<double> rates = sir_rates(contact, immune_set, cfg, base_seed);
    double total = 0.0;
    for (double r : rates) total += r;
    return total / static_cast<double>(rates.size());
}

ContainmentRow containment_table(const Hypernetwork& contact, const Strategy& strategy,
                                 const SirConfig& cfg) {
    ContainmentRow row;
    row.ratios = cfg.immune_ratios;

    std::vector<int> ranking =
        dismantle(contact, strategy, cfg.rank_batch_frac).removal_order();
    int n = contact.node_count();
    for (size_t i = 0; i < cfg.immune_ratios.size(); ++i) {
        double ratio = cfg.immune_ratios[i];
        if (ratio < 0.0 || ratio > 1.0) fail("invalid-config", "immune ratio outside [0,1]");
        int k = static_cast<int>(std::ceil(ratio * n));
        k = std::min<int>(k, static_cast<int>(ranking.size()));
        std::vector<int> immune(ranking.begin(), ranking.begin() + k);
        uint64_t ratio_seed = derive_seed(derive_seed(cfg.seed, Stream::Sir), i);
        row.mean_infection_rate.push_back(sir_simulate(contact, immune, cfg, ratio_seed));
    }
    return row;
}

}  // namespace hyperdm
