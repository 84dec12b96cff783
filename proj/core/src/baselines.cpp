#include "hyperdm/baselines.hpp"

#include <algorithm>
#include <deque>

#include "hyperdm/error.hpp"

namespace hyperdm {

std::string strategy_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::HD: return "HD";
        case StrategyKind::HDA: return "HDA";
        case StrategyKind::HHD: return "HHD";
        case StrategyKind::HHDA: return "HHDA";
        case StrategyKind::CI: return "CI";
        case StrategyKind::Agent: return "AGENT";
        case StrategyKind::Random: return "RANDOM";
    }
    return "?";
}

std::string Strategy::name() const { return strategy_name(kind); }

StrategyKind strategy_from_name(const std::string& name) {
    std::string up;
    up.reserve(name.size());
    for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "HD") return StrategyKind::HD;
    if (up == "HDA") return StrategyKind::HDA;
    if (up == "HHD") return StrategyKind::HHD;
    if (up == "HHDA") return StrategyKind::HHDA;
    if (up == "CI") return StrategyKind::CI;
    if (up == "AGENT") return StrategyKind::Agent;
    if (up == "RANDOM") return StrategyKind::Random;
    fail("invalid-config", "unknown strategy '" + name + "'");
}

double collective_influence(const SimpleGraph& graph, int v, int radius) {
    int kv = graph.degree(v);
    if (kv <= 1) return 0.0;
    // BFS out to exactly `radius` hops
    std::vector<int> dist(graph.adj.size(), -1);
    std::deque<int> frontier = {v};
    dist[v] = 0;
    double boundary_sum = 0.0;
    while (!frontier.empty()) {
        int u = frontier.front();
        frontier.pop_front();
        if (dist[u] == radius) {
            boundary_sum += graph.degree(u) - 1;
            continue;
        }
        for (int w : graph.adj[u]) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                frontier.push_back(w);
            }
        }
    }
    return static_cast<double>(kv - 1) * boundary_sum;
}

std::vector<double> residual_scores(const Hypernetwork& g, StrategyKind kind, int ci_radius) {
    std::vector<double> scores(g.initial_node_count(), 0.0);
    switch (kind) {
        case StrategyKind::HD:
        case StrategyKind::HDA: {
            SimpleGraph s = two_section(g);
            for (int v : g.nodes()) scores[v] = s.degree(v);
            break;
        }
        case StrategyKind::HHD:
        case StrategyKind::HHDA:
            for (int v : g.nodes()) scores[v] = g.hyper_degree(v);
            break;
        case StrategyKind::CI: {
            SimpleGraph s = two_section(g);
            for (int v : g.nodes()) scores[v] = collective_influence(s, v, ci_radius);
            break;
        }
        default:
            fail("invalid-config", "strategy has no residual score");
    }
    return scores;
}

std::vector<int> static_order(const Hypernetwork& g, StrategyKind kind) {
    if (kind != StrategyKind::HD && kind != StrategyKind::HHD)
        fail("invalid-config", "static order is defined for HD and HHD only");
    std::vector<double> scores = residual_scores(g, kind, 0);
    std::vector<int> order = g.nodes();
    std::stable_sort(order.begin(), order.end(), [&scores](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return order;
}

int adaptive_next(const Hypernetwork& residual, StrategyKind kind, int ci_radius) {
    if (residual.empty()) fail("no-actions", "no nodes remain");
    std::vector<double> scores = residual_scores(residual, kind, ci_radius);
    int best = -1;
    for (int v : residual.nodes()) {
        if (best < 0 || scores[v] > scores[best]) best = v;
    }
    return best;
}

}  // namespace hyperdm
