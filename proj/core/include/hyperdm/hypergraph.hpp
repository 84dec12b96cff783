#pragma once

#include <cstdint>
#include <vector>

namespace hyperdm {

// A hypernetwork over dense integer node ids. Node and hyperedge ids are
// stable: removing a node never renumbers the survivors, and ids are never
// reused. Hyperedge member lists keep their construction order (removal
// preserves the relative order of the remaining members), which keeps every
// reduction over members independent of the node labeling.
//
// Values are immutable after construction except through node removal;
// remove_node returns a logically new value, remove_node_in_place mutates a
// single-owner copy.
class Hypernetwork {
public:
    Hypernetwork() = default;

    // node_count fixes the id space 0..node_count-1; hyperedges may leave
    // some nodes isolated. Duplicate members are dropped (first occurrence
    // wins); an empty hyperedge is rejected.
    Hypernetwork(int node_count, std::vector<std::vector<int>> hyperedges);

    // Id space inferred as max member id + 1.
    static Hypernetwork from_edges(std::vector<std::vector<int>> hyperedges);

    int initial_node_count() const { return static_cast<int>(node_alive_.size()); }
    int node_count() const { return alive_nodes_; }
    int hyperedge_count() const { return alive_edges_; }
    bool empty() const { return alive_nodes_ == 0; }

    bool has_node(int v) const;
    bool has_hyperedge(int e) const;

    // Members in construction order; valid only for alive hyperedges.
    const std::vector<int>& members(int e) const;
    // Incident hyperedge ids in ascending order; valid only for alive nodes.
    const std::vector<int>& incident_edges(int v) const;

    std::vector<int> nodes() const;       // alive node ids, ascending
    std::vector<int> hyperedges() const;  // alive hyperedge ids, ascending

    // Number of hyperedges containing v.
    int hyper_degree(int v) const;
    // Multiplicity-weighted co-member count: sum over incident hyperedges of
    // (size - 1).
    int degree(int v) const;

    // True when no hyperedge of size >= 2 remains.
    bool fully_fragmented() const;

    Hypernetwork remove_node(int v) const;
    void remove_node_in_place(int v);

    // Structural fingerprint over alive nodes and hyperedge member lists.
    uint64_t fingerprint() const;

    bool operator==(const Hypernetwork& other) const;

private:
    std::vector<std::vector<int>> members_;   // hyperedge id -> member ids
    std::vector<std::vector<int>> incident_;  // node id -> hyperedge ids, ascending
    std::vector<uint8_t> node_alive_;
    std::vector<uint8_t> edge_alive_;
    int alive_nodes_ = 0;
    int alive_edges_ = 0;
};

// Connected components of a hypernetwork: nodes are connected when a chain
// of shared hyperedges joins them. Component ids are assigned in ascending
// order of each component's smallest node id.
struct ComponentLabeling {
    std::vector<int> label;       // node id -> component id, -1 for removed nodes
    std::vector<int> node_count;  // per component
    std::vector<int> edge_count;  // per component
    std::vector<int> min_node;    // per component

    int count() const { return static_cast<int>(node_count.size()); }
};

ComponentLabeling components(const Hypernetwork& g);

// Component with the most hyperedges; ties broken by larger node count,
// then by smallest contained node id. Errors with "empty-hypernetwork" when
// no nodes remain.
int gcc(const Hypernetwork& g);
int gcc(const ComponentLabeling& labeling);

// Fraction of original_n nodes lying in the giant connected component.
// original_n is the node count of the episode's initial hypernetwork, held
// fixed across removals. Returns 0 for an empty hypernetwork; errors with
// "invalid-denominator" when original_n is 0.
double connectivity(const Hypernetwork& g, int original_n);

// Simple undirected graph over the same node-id space.
struct SimpleGraph {
    std::vector<uint8_t> present;       // node id alive
    std::vector<std::vector<int>> adj;  // node id -> sorted distinct neighbors

    int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

// Clique expansion: edge (u,v) iff u != v share at least one hyperedge.
SimpleGraph two_section(const Hypernetwork& g);

}  // namespace hyperdm
