#include "hyperdm/io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hyperdm/error.hpp"

namespace hyperdm {

using nlohmann::json;

InputFormat format_from_name(const std::string& name) {
    if (name == "hyperedge-list") return InputFormat::HyperedgeList;
    if (name == "contact-timestamps") return InputFormat::ContactTimestamps;
    fail("invalid-config", "unknown input format '" + name + "'");
}

std::string format_name(InputFormat format) {
    return format == InputFormat::HyperedgeList ? "hyperedge-list" : "contact-timestamps";
}

namespace {

struct RawEdges {
    std::vector<std::vector<long long>> edges;  // original ids
};

RawEdges parse_file(const std::string& path, InputFormat format) {
    std::ifstream in(path);
    if (!in) fail("empty-dataset", "cannot open '" + path + "'");
    RawEdges raw;
    std::vector<std::pair<long long, size_t>> timestamped;  // (timestamp, edge index)
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::vector<long long> tokens;
        long long value;
        while (ls >> value) {
            if (value < 0)
                fail("empty-dataset",
                     "line " + std::to_string(line_no) + ": negative id in '" + path + "'");
            tokens.push_back(value);
        }
        if (!ls.eof()) {
            std::string bad;
            ls.clear();
            ls >> bad;
            fail("empty-dataset", "line " + std::to_string(line_no) + ": malformed token '" +
                                      bad + "' in '" + path + "'");
        }
        if (tokens.empty()) continue;
        if (format == InputFormat::ContactTimestamps) {
            if (tokens.size() < 2)
                fail("empty-dataset",
                     "line " + std::to_string(line_no) + ": contact group without members");
            long long ts = tokens.front();
            tokens.erase(tokens.begin());
            timestamped.emplace_back(ts, raw.edges.size());
        }
        raw.edges.push_back(std::move(tokens));
    }
    if (format == InputFormat::ContactTimestamps) {
        std::stable_sort(timestamped.begin(), timestamped.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::vector<long long>> ordered;
        ordered.reserve(raw.edges.size());
        for (const auto& [ts, idx] : timestamped) ordered.push_back(std::move(raw.edges[idx]));
        raw.edges = std::move(ordered);
    }
    if (raw.edges.empty()) fail("empty-dataset", "no hyperedges in '" + path + "'");
    return raw;
}

LoadResult densify(const std::vector<std::vector<long long>>& edges) {
    std::map<long long, int> id_map;
    for (const auto& e : edges)
        for (long long v : e) id_map.emplace(v, 0);
    LoadResult out;
    out.original_ids.reserve(id_map.size());
    for (auto& [orig, dense] : id_map) {
        dense = static_cast<int>(out.original_ids.size());
        out.original_ids.push_back(orig);
    }
    std::vector<std::vector<int>> dense_edges;
    dense_edges.reserve(edges.size());
    for (const auto& e : edges) {
        std::vector<int> de;
        de.reserve(e.size());
        for (long long v : e) de.push_back(id_map[v]);
        dense_edges.push_back(std::move(de));
    }
    out.graph = Hypernetwork(static_cast<int>(out.original_ids.size()), std::move(dense_edges));
    return out;
}

}  // namespace

LoadResult load_hypernetwork(const std::string& path, InputFormat format, bool restrict_to_gcc) {
    RawEdges raw = parse_file(path, format);
    LoadResult loaded = densify(raw.edges);
    if (!restrict_to_gcc) return loaded;

    ComponentLabeling labeling = components(loaded.graph);
    int keep = gcc(labeling);
    std::vector<std::vector<long long>> kept_edges;
    for (int e : loaded.graph.hyperedges()) {
        const auto& mem = loaded.graph.members(e);
        if (labeling.label[mem.front()] != keep) continue;
        std::vector<long long> orig;
        orig.reserve(mem.size());
        for (int v : mem) orig.push_back(loaded.original_ids[v]);
        kept_edges.push_back(std::move(orig));
    }
    return densify(kept_edges);
}

void save_hyperedge_list(const Hypernetwork& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("empty-dataset", "cannot write '" + path + "'");
    for (int e : g.hyperedges()) {
        const auto& mem = g.members(e);
        for (size_t i = 0; i < mem.size(); ++i) {
            if (i) out << ' ';
            out << mem[i];
        }
        out << '\n';
    }
}

void save_checkpoint(const ParameterSet& params, const std::string& path) {
    json doc;
    doc["format"] = "hyperdm-checkpoint";
    doc["version"] = kCheckpointVersion;
    doc["depth"] = params.dims.depth;
    doc["width"] = params.dims.width;
    json matrices = json::object();
    params.for_each([&matrices](const std::string& name, const Eigen::MatrixXd& m) {
        json entry;
        entry["rows"] = m.rows();
        entry["cols"] = m.cols();
        std::vector<double> data;
        data.reserve(static_cast<size_t>(m.size()));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
        entry["data"] = std::move(data);
        matrices[name] = std::move(entry);
    });
    doc["matrices"] = std::move(matrices);
    std::ofstream out(path);
    if (!out) fail("empty-dataset", "cannot write '" + path + "'");
    out << doc.dump(1) << '\n';
}

ParameterSet load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("empty-dataset", "cannot open checkpoint '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        fail("checkpoint-version", std::string("unreadable checkpoint: ") + e.what());
    }
    if (!doc.contains("version") || doc["version"].get<int>() != kCheckpointVersion)
        fail("checkpoint-version", "checkpoint version mismatch in '" + path + "'");
    EmbedDims dims{doc["depth"].get<int>(), doc["width"].get<int>()};
    ParameterSet params = ParameterSet::zeros(dims);
    const json& matrices = doc["matrices"];
    params.for_each([&matrices, &path](const std::string& name, Eigen::MatrixXd& m) {
        if (!matrices.contains(name))
            fail("checkpoint-version", "missing matrix '" + name + "' in '" + path + "'");
        const json& entry = matrices[name];
        Eigen::Index rows = entry["rows"].get<Eigen::Index>();
        Eigen::Index cols = entry["cols"].get<Eigen::Index>();
        if (rows != m.rows() || cols != m.cols())
            fail("checkpoint-version", "shape mismatch for '" + name + "' in '" + path + "'");
        const auto& data = entry["data"];
        size_t i = 0;
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[i++].get<double>();
    });
    return params;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("empty-dataset", "cannot open '" + path + "'");
    uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
        if (in.eof()) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return std::string(hex);
}

std::string format_fixed6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return std::string(buf);
}

void write_manifest(const Manifest& manifest, const std::string& path) {
    json doc;
    doc["command"] = manifest.command;
    doc["argv"] = manifest.argv;
    doc["config"] = manifest.config;
    doc["seed"] = manifest.seed;
    doc["inputs"] = manifest.input_digests;
    doc["tool_version"] = manifest.tool_version;
    doc["started_utc"] = manifest.started_utc;
    doc["finished_utc"] = manifest.finished_utc;
    std::ofstream out(path);
    if (!out) fail("empty-dataset", "cannot write '" + path + "'");
    out << doc.dump(1) << '\n';
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("empty-dataset", "cannot open manifest '" + path + "'");
    json doc;
    in >> doc;
    Manifest m;
    m.command = doc["command"].get<std::string>();
    m.argv = doc["argv"].get<std::vector<std::string>>();
    m.config = doc["config"].get<std::map<std::string, std::string>>();
    m.seed = doc["seed"].get<uint64_t>();
    m.input_digests = doc["inputs"].get<std::map<std::string, std::string>>();
    m.tool_version = doc["tool_version"].get<std::string>();
    m.started_utc = doc["started_utc"].get<std::string>();
    m.finished_utc = doc["finished_utc"].get<std::string>();
    return m;
}

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

}  // namespace hyperdm
