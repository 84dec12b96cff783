#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "hyperdm/error.hpp"
#include "hyperdm/io.hpp"
#include "hyperdm/synthgen.hpp"

using hyperdm::Error;
using hyperdm::Hypernetwork;
using hyperdm::InputFormat;
using hyperdm::load_hypernetwork;

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& leaf) const { return (path / leaf).string(); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::set<std::set<long long>> edge_sets(const Hypernetwork& g,
                                        const std::vector<long long>& ids) {
    std::set<std::set<long long>> out;
    for (int e : g.hyperedges()) {
        std::set<long long> mem;
        for (int v : g.members(e)) mem.insert(ids[v]);
        out.insert(std::move(mem));
    }
    return out;
}

}  // namespace

TEST_CASE("hyperedge-list files load with densified ids") {
    TempDir dir("hyperdm_io_load");
    write_file(dir.file("a.hel"), "0 1 2\n2 3\n");
    auto loaded = load_hypernetwork(dir.file("a.hel"), InputFormat::HyperedgeList, false);
    CHECK(loaded.graph.node_count() == 4);
    CHECK(loaded.graph.hyperedge_count() == 2);

    // sparse ids densify; comments and blank lines are skipped
    write_file(dir.file("b.hel"), "# contacts\n10 700\n\n700 44\n");
    auto sparse = load_hypernetwork(dir.file("b.hel"), InputFormat::HyperedgeList, false);
    CHECK(sparse.graph.node_count() == 3);
    CHECK(sparse.original_ids == std::vector<long long>{10, 44, 700});
}

TEST_CASE("gcc restriction keeps the hyperedge-richest component") {
    TempDir dir("hyperdm_io_gcc");
    write_file(dir.file("two.hel"), "0 1\n1 2\n5 6\n");
    auto full = load_hypernetwork(dir.file("two.hel"), InputFormat::HyperedgeList, false);
    CHECK(full.graph.node_count() == 5);
    auto restricted = load_hypernetwork(dir.file("two.hel"), InputFormat::HyperedgeList, true);
    CHECK(restricted.graph.node_count() == 3);
    CHECK(restricted.original_ids == std::vector<long long>{0, 1, 2});
}

TEST_CASE("save/load round-trips the hyperedge sets") {
    TempDir dir("hyperdm_io_roundtrip");
    hyperdm::GenConfig cfg;
    cfg.seed = 17;
    Hypernetwork g = hyperdm::generate(cfg);
    hyperdm::save_hyperedge_list(g, dir.file("g.hel"));
    auto loaded = load_hypernetwork(dir.file("g.hel"), InputFormat::HyperedgeList, false);
    std::vector<long long> identity;
    for (int v = 0; v < g.initial_node_count(); ++v) identity.push_back(v);
    CHECK(edge_sets(g, identity) == edge_sets(loaded.graph, loaded.original_ids));
}

TEST_CASE("malformed and empty inputs are rejected with context") {
    TempDir dir("hyperdm_io_bad");
    write_file(dir.file("bad.hel"), "0 1\n2 x 3\n");
    CHECK_THROWS_WITH_AS(load_hypernetwork(dir.file("bad.hel"), InputFormat::HyperedgeList, false),
                         doctest::Contains("line 2"), Error);
    write_file(dir.file("empty.hel"), "# nothing\n\n");
    CHECK_THROWS_WITH_AS(
        load_hypernetwork(dir.file("empty.hel"), InputFormat::HyperedgeList, false),
        doctest::Contains("empty-dataset"), Error);
}

TEST_CASE("contact files order groups by timestamp") {
    TempDir dir("hyperdm_io_contact");
    write_file(dir.file("c.txt"), "500 4 5\n100 1 2 3\n300 2 4\n");
    auto loaded = load_hypernetwork(dir.file("c.txt"), InputFormat::ContactTimestamps, false);
    CHECK(loaded.graph.hyperedge_count() == 3);
    // earliest group (timestamp 100) must be hyperedge 0
    std::set<long long> first;
    for (int v : loaded.graph.members(0)) first.insert(loaded.original_ids[v]);
    CHECK(first == std::set<long long>{1, 2, 3});
}

TEST_CASE("checkpoints round-trip bit-exactly and reject foreign versions") {
    TempDir dir("hyperdm_io_ckpt");
    hyperdm::Rng rng(3);
    auto params = hyperdm::ParameterSet::random(hyperdm::EmbedDims{3, 8}, rng);
    hyperdm::save_checkpoint(params, dir.file("p.json"));
    auto loaded = hyperdm::load_checkpoint(dir.file("p.json"));
    bool equal = loaded.dims == params.dims;
    params.for_each([&](const std::string& name, Eigen::MatrixXd& m) {
        loaded.for_each([&](const std::string& other, Eigen::MatrixXd& o) {
            if (name == other && !(m == o)) equal = false;
        });
    });
    CHECK(equal);

    std::string text = read_file(dir.file("p.json"));
    size_t pos = text.find("\"version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "\"version\": 9");
    write_file(dir.file("bad.json"), text);
    CHECK_THROWS_WITH_AS(hyperdm::load_checkpoint(dir.file("bad.json")),
                         doctest::Contains("checkpoint-version"), Error);
}

TEST_CASE("fixed-point formatting is locale-independent six digits") {
    CHECK(hyperdm::format_fixed6(0.5) == "0.500000");
    CHECK(hyperdm::format_fixed6(-1.0 / 3.0) == "-0.333333");
    CHECK(hyperdm::format_fixed6(2.0) == "2.000000");
}

TEST_CASE("gen emits instances plus a manifest") {
    TempDir dir("hyperdm_cli_gen");
    int rc = hyperdm::cli::run_command({"gen", "--count", "2", "--seed", "11", "--out-dir",
                                        dir.file("out")});
    CHECK(rc == 0);
    CHECK(fs::exists(dir.file("out") + "/instance_0000.hel"));
    CHECK(fs::exists(dir.file("out") + "/instance_0001.hel"));
    auto manifest = hyperdm::read_manifest(dir.file("out") + "/manifest.json");
    CHECK(manifest.command == "gen");
    CHECK(manifest.seed == 11);
}

TEST_CASE("identical argv and seed give byte-identical result CSVs") {
    TempDir dir("hyperdm_cli_det");
    REQUIRE(hyperdm::cli::run_command(
                {"gen", "--count", "1", "--seed", "23", "--out-dir", dir.file("data")}) == 0);
    std::string input = dir.file("data") + "/instance_0000.hel";

    for (const std::string strategy : {"HHDA", "RANDOM"}) {
        std::vector<std::string> base = {"dismantle", "--input", input,   "--strategy",
                                         strategy,    "--seed",  "5",     "--batch-frac",
                                         "0.05",      "--out-dir", ""};
        base.back() = dir.file("r1_" + strategy);
        REQUIRE(hyperdm::cli::run_command(base) == 0);
        base.back() = dir.file("r2_" + strategy);
        REQUIRE(hyperdm::cli::run_command(base) == 0);
        CHECK(read_file(dir.file("r1_" + strategy) + "/trace.csv") ==
              read_file(dir.file("r2_" + strategy) + "/trace.csv"));
        CHECK(read_file(dir.file("r1_" + strategy) + "/summary.csv") ==
              read_file(dir.file("r2_" + strategy) + "/summary.csv"));
    }
}

TEST_CASE("eval writes one ANC column per strategy") {
    TempDir dir("hyperdm_cli_eval");
    REQUIRE(hyperdm::cli::run_command(
                {"gen", "--count", "1", "--seed", "29", "--out-dir", dir.file("data")}) == 0);
    std::string input = dir.file("data") + "/instance_0000.hel";
    REQUIRE(hyperdm::cli::run_command({"eval", "--input", input, "--strategies", "HHD,HHDA",
                                       "--out-dir", dir.file("out")}) == 0);
    std::string csv = read_file(dir.file("out") + "/anc.csv");
    CHECK(csv.substr(0, 9) == "HHD,HHDA\n");
    std::istringstream rows(csv);
    std::string header, values;
    std::getline(rows, header);
    std::getline(rows, values);
    CHECK(values.find(',') != std::string::npos);
}

TEST_CASE("agent dismantling without a checkpoint is a usage error") {
    TempDir dir("hyperdm_cli_agent");
    REQUIRE(hyperdm::cli::run_command(
                {"gen", "--count", "1", "--seed", "31", "--out-dir", dir.file("data")}) == 0);
    std::string input = dir.file("data") + "/instance_0000.hel";
    CHECK(hyperdm::cli::run_command({"dismantle", "--input", input, "--strategy", "AGENT",
                                     "--out-dir", dir.file("out")}) != 0);
}

TEST_CASE("unknown subcommands and flags exit nonzero") {
    CHECK(hyperdm::cli::run_command({"frobnicate"}) != 0);
    CHECK(hyperdm::cli::run_command({"gen", "--no-such-flag"}) != 0);
}

TEST_CASE("config file values yield to explicit flags") {
    TempDir dir("hyperdm_cli_config");
    write_file(dir.file("cfg.ini"), "[gen]\ncount=3\nseed=77\n");
    REQUIRE(hyperdm::cli::run_command({"--config", dir.file("cfg.ini"), "gen", "--count", "1",
                                       "--out-dir", dir.file("out")}) == 0);
    CHECK(fs::exists(dir.file("out") + "/instance_0000.hel"));
    CHECK(!fs::exists(dir.file("out") + "/instance_0001.hel"));
    auto manifest = hyperdm::read_manifest(dir.file("out") + "/manifest.json");
    CHECK(manifest.seed == 77);  // from the config file
}

TEST_CASE("sir subcommand emits the containment grid") {
    TempDir dir("hyperdm_cli_sir");
    write_file(dir.file("contacts.txt"), "100 0 1 2\n200 2 3\n300 3 4 5\n400 1 5\n500 0 4\n");
    REQUIRE(hyperdm::cli::run_command({"sir", "--input", dir.file("contacts.txt"),
                                       "--strategies", "HD,HHDA", "--reps", "10", "--ratios",
                                       "0,0.2", "--seed", "9", "--out-dir",
                                       dir.file("out")}) == 0);
    std::string csv = read_file(dir.file("out") + "/containment.csv");
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    CHECK(line == "strategy,0.000000,0.200000");
    std::getline(rows, line);
    CHECK(line.substr(0, 3) == "HD,");
    std::getline(rows, line);
    CHECK(line.substr(0, 5) == "HHDA,");
}
