#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hyperdm/embedding.hpp"
#include "hyperdm/hypergraph.hpp"

namespace hyperdm {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kCheckpointVersion = 1;

enum class InputFormat { HyperedgeList, ContactTimestamps };

InputFormat format_from_name(const std::string& name);
std::string format_name(InputFormat format);

// A loaded hypernetwork plus the map from dense node id back to the id used
// in the input file.
struct LoadResult {
    Hypernetwork graph;
    std::vector<long long> original_ids;  // dense id -> file id
};

// Hyperedge-list format: one hyperedge per line, whitespace-separated
// non-negative integer ids, '#' starts a comment. Contact-timestamps format:
// `timestamp node node ...` per line; groups are ordered by timestamp so the
// earliest contact group becomes hyperedge 0. Node ids are densified; with
// restrict_to_gcc only the giant connected component survives (re-densified).
// Malformed lines error with the line number; an input with no hyperedges
// errors with "empty-dataset".
LoadResult load_hypernetwork(const std::string& path, InputFormat format, bool restrict_to_gcc);

void save_hyperedge_list(const Hypernetwork& g, const std::string& path);

// Checkpoints are JSON: a version tag, the layer dims, and every named
// weight matrix as a row-major double array. Round-trips are bit-exact.
// A version mismatch errors with "checkpoint-version".
void save_checkpoint(const ParameterSet& params, const std::string& path);
ParameterSet load_checkpoint(const std::string& path);

// FNV-1a over the file bytes, as a fixed-width hex string.
std::string file_digest(const std::string& path);

// Fixed-point formatting used for every numeric CSV field: 6 decimal
// digits, '.' separator, no locale dependence.
std::string format_fixed6(double value);

// Run provenance: enough to re-run the command bit-identically.
struct Manifest {
    std::string command;
    std::vector<std::string> argv;
    std::map<std::string, std::string> config;
    uint64_t seed = 0;
    std::map<std::string, std::string> input_digests;
    std::string tool_version = kToolVersion;
    std::string started_utc;
    std::string finished_utc;
};

void write_manifest(const Manifest& manifest, const std::string& path);
Manifest read_manifest(const std::string& path);

std::string utc_timestamp();

}  // namespace hyperdm
