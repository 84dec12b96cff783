#include "hyperdm/hypergraph.hpp"

#include <algorithm>
#include <numeric>

#include "hyperdm/error.hpp"

namespace hyperdm {

namespace {

// Plain union-find, path halving + union by size.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

}  // namespace

Hypernetwork::Hypernetwork(int node_count, std::vector<std::vector<int>> hyperedges) {
    if (node_count < 0) fail("invalid-config", "negative node count");
    node_alive_.assign(node_count, 1);
    incident_.assign(node_count, {});
    alive_nodes_ = node_count;
    members_.reserve(hyperedges.size());
    edge_alive_.reserve(hyperedges.size());
    std::vector<uint8_t> seen(node_count, 0);
    for (auto& raw : hyperedges) {
        if (raw.empty()) fail("invalid-config", "empty hyperedge in construction");
        std::vector<int> mem;
        mem.reserve(raw.size());
        for (int v : raw) {
            if (v < 0 || v >= node_count) fail("node-not-found", "hyperedge member out of range");
            if (!seen[v]) {
                seen[v] = 1;
                mem.push_back(v);
            }
        }
        for (int v : mem) seen[v] = 0;
        int e = static_cast<int>(members_.size());
        for (int v : mem) incident_[v].push_back(e);
        members_.push_back(std::move(mem));
        edge_alive_.push_back(1);
    }
    alive_edges_ = static_cast<int>(members_.size());
}

Hypernetwork Hypernetwork::from_edges(std::vector<std::vector<int>> hyperedges) {
    int max_id = -1;
    for (const auto& e : hyperedges)
        for (int v : e) max_id = std::max(max_id, v);
    return Hypernetwork(max_id + 1, std::move(hyperedges));
}

bool Hypernetwork::has_node(int v) const {
    return v >= 0 && v < initial_node_count() && node_alive_[v];
}

bool Hypernetwork::has_hyperedge(int e) const {
    return e >= 0 && e < static_cast<int>(members_.size()) && edge_alive_[e];
}

const std::vector<int>& Hypernetwork::members(int e) const {
    if (!has_hyperedge(e)) fail("node-not-found", "unknown hyperedge id");
    return members_[e];
}

const std::vector<int>& Hypernetwork::incident_edges(int v) const {
    if (!has_node(v)) fail("node-not-found", "unknown node id");
    return incident_[v];
}

std::vector<int> Hypernetwork::nodes() const {
    std::vector<int> out;
    out.reserve(alive_nodes_);
    for (int v = 0; v < initial_node_count(); ++v)
        if (node_alive_[v]) out.push_back(v);
    return out;
}

std::vector<int> Hypernetwork::hyperedges() const {
    std::vector<int> out;
    out.reserve(alive_edges_);
    for (int e = 0; e < static_cast<int>(members_.size()); ++e)
        if (edge_alive_[e]) out.push_back(e);
    return out;
}

int Hypernetwork::hyper_degree(int v) const {
    if (!has_node(v)) fail("node-not-found", "unknown node id");
    return static_cast<int>(incident_[v].size());
}

int Hypernetwork::degree(int v) const {
    if (!has_node(v)) fail("node-not-found", "unknown node id");
    int total = 0;
    for (int e : incident_[v]) total += static_cast<int>(members_[e].size()) - 1;
    return total;
}

bool Hypernetwork::fully_fragmented() const {
    for (int e = 0; e < static_cast<int>(members_.size()); ++e)
        if (edge_alive_[e] && members_[e].size() >= 2) return false;
    return true;
}

void Hypernetwork::remove_node_in_place(int v) {
    if (!has_node(v)) fail("node-not-found", "unknown node id");
    for (int e : incident_[v]) {
        auto& mem = members_[e];
        mem.erase(std::find(mem.begin(), mem.end(), v));
        if (mem.empty()) {
            edge_alive_[e] = 0;
            --alive_edges_;
        }
    }
    incident_[v].clear();
    incident_[v].shrink_to_fit();
    node_alive_[v] = 0;
    --alive_nodes_;
}

Hypernetwork Hypernetwork::remove_node(int v) const {
    Hypernetwork copy(*this);
    copy.remove_node_in_place(v);
    return copy;
}

uint64_t Hypernetwork::fingerprint() const {
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](uint64_t x) {
        h ^= x;
        h *= 0x100000001b3ull;
    };
    mix(static_cast<uint64_t>(initial_node_count()));
    for (int v = 0; v < initial_node_count(); ++v)
        if (node_alive_[v]) mix(static_cast<uint64_t>(v) + 1);
    for (int e = 0; e < static_cast<int>(members_.size()); ++e) {
        if (!edge_alive_[e]) continue;
        mix(0x9e3779b97f4a7c15ull + static_cast<uint64_t>(e));
        for (int v : members_[e]) mix(static_cast<uint64_t>(v) + 0x51ull);
    }
    return h;
}

bool Hypernetwork::operator==(const Hypernetwork& other) const {
    if (initial_node_count() != other.initial_node_count()) return false;
    if (node_alive_ != other.node_alive_) return false;
    if (members_.size() != other.members_.size()) return false;
    if (edge_alive_ != other.edge_alive_) return false;
    for (size_t e = 0; e < members_.size(); ++e) {
        if (!edge_alive_[e]) continue;
        if (members_[e] != other.members_[e]) return false;
    }
    return true;
}

ComponentLabeling components(const Hypernetwork& g) {
    int n = g.initial_node_count();
    UnionFind uf(n);
    for (int e : g.hyperedges()) {
        const auto& mem = g.members(e);
        for (size_t k = 1; k < mem.size(); ++k) uf.unite(mem[0], mem[k]);
    }

    ComponentLabeling out;
    out.label.assign(n, -1);
    std::vector<int> comp_of_root(n, -1);
    for (int v = 0; v < n; ++v) {
        if (!g.has_node(v)) continue;
        int root = uf.find(v);
        if (comp_of_root[root] < 0) {
            comp_of_root[root] = static_cast<int>(out.node_count.size());
            out.node_count.push_back(0);
            out.edge_count.push_back(0);
            out.min_node.push_back(v);
        }
        int c = comp_of_root[root];
        out.label[v] = c;
        out.node_count[c] += 1;
    }
    for (int e : g.hyperedges()) {
        int c = out.label[g.members(e)[0]];
        out.edge_count[c] += 1;
    }
    return out;
}

int gcc(const ComponentLabeling& labeling) {
    if (labeling.count() == 0) fail("empty-hypernetwork", "no components");
    int best = 0;
    for (int c = 1; c < labeling.count(); ++c) {
        if (labeling.edge_count[c] > labeling.edge_count[best] ||
            (labeling.edge_count[c] == labeling.edge_count[best] &&
             labeling.node_count[c] > labeling.node_count[best])) {
            best = c;
        }
        // equal counts keep the earlier component, whose min_node is smaller
    }
    return best;
}

int gcc(const Hypernetwork& g) {
    if (g.empty()) fail("empty-hypernetwork", "gcc of empty hypernetwork");
    return gcc(components(g));
}

double connectivity(const Hypernetwork& g, int original_n) {
    if (original_n <= 0) fail("invalid-denominator", "original node count must be positive");
    if (g.empty()) return 0.0;
    ComponentLabeling labeling = components(g);
    int c = gcc(labeling);
    return static_cast<double>(labeling.node_count[c]) / static_cast<double>(original_n);
}

SimpleGraph two_section(const Hypernetwork& g) {
    SimpleGraph out;
    int n = g.initial_node_count();
    out.present.assign(n, 0);
    out.adj.assign(n, {});
    for (int v : g.nodes()) out.present[v] = 1;
    for (int e : g.hyperedges()) {
        const auto& mem = g.members(e);
        for (size_t i = 0; i < mem.size(); ++i)
            for (size_t j = 0; j < mem.size(); ++j)
                if (i != j) out.adj[mem[i]].push_back(mem[j]);
    }
    for (int v = 0; v < n; ++v) {
        auto& a = out.adj[v];
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return out;
}

}  // namespace hyperdm
