#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hyperdm/agent.hpp"
#include "hyperdm/baselines.hpp"
#include "hyperdm/dismantle.hpp"
#include "hyperdm/error.hpp"
#include "hyperdm/io.hpp"
#include "hyperdm/sir.hpp"
#include "hyperdm/synthgen.hpp"

namespace hyperdm::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream stream(csv);
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

struct OutputDir {
    fs::path root;

    explicit OutputDir(const std::string& dir) : root(dir) { fs::create_directories(root); }
    std::string path(const std::string& name) const { return (root / name).string(); }
};

void write_idmap(const LoadResult& loaded, const OutputDir& out) {
    std::ofstream f(out.path("idmap.csv"));
    f << "original_id,node_id\n";
    for (size_t i = 0; i < loaded.original_ids.size(); ++i)
        f << loaded.original_ids[i] << ',' << i << '\n';
}

// Shared input flags for the commands that read a hypernetwork from disk.
struct InputArgs {
    std::string path;
    std::string format = "hyperedge-list";
    bool restrict_gcc = false;

    void attach(CLI::App* cmd, const std::string& default_format) {
        format = default_format;
        cmd->add_option("--input", path, "Input hypernetwork file")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--format", format, "Input format")
            ->check(CLI::IsMember({"hyperedge-list", "contact-timestamps"}));
        cmd->add_flag("--gcc", restrict_gcc, "Restrict to the giant connected component");
    }

    LoadResult load() const {
        return load_hypernetwork(path, format_from_name(format), restrict_gcc);
    }
};

struct StrategyArgs {
    std::string ci_radius_help = "Ball radius for collective influence";
    int ci_radius = 2;
    std::string checkpoint;
    uint64_t seed = 0;
    std::optional<ParameterSet> agent_params;

    void attach(CLI::App* cmd) {
        cmd->add_option("--ci-radius", ci_radius, ci_radius_help)->check(CLI::PositiveNumber);
        cmd->add_option("--checkpoint", checkpoint, "Agent checkpoint (required for AGENT)")
            ->check(CLI::ExistingFile);
    }

    Strategy make(StrategyKind kind) {
        Strategy s;
        s.kind = kind;
        s.ci_radius = ci_radius;
        s.random_seed = seed;
        if (kind == StrategyKind::Agent) {
            if (checkpoint.empty())
                throw CLI::RequiredError("--checkpoint (needed by the AGENT strategy)");
            if (!agent_params) agent_params = load_checkpoint(checkpoint);
            s.agent_params = &*agent_params;
        }
        return s;
    }
};

Manifest make_manifest(const std::string& command, const std::vector<std::string>& argv,
                       uint64_t seed) {
    Manifest m;
    m.command = command;
    m.argv = argv;
    m.seed = seed;
    m.started_utc = utc_timestamp();
    return m;
}

void finish_manifest(Manifest& m, const OutputDir& out) {
    m.finished_utc = utc_timestamp();
    write_manifest(m, out.path("manifest.json"));
}

// ---- gen ----------------------------------------------------------------

struct GenCmd {
    GenConfig cfg;
    int count = 1;
    std::string out_dir = ".";

    void attach(CLI::App* cmd) {
        cmd->add_option("--count", count, "Number of instances")->check(CLI::PositiveNumber);
        cmd->add_option("--n-min", cfg.n_min, "Minimum node count");
        cmd->add_option("--n-max", cfg.n_max, "Maximum node count");
        cmd->add_option("--p-burn", cfg.p_burn, "Burning probability");
        cmd->add_option("--p-expand", cfg.p_expand, "Expanding probability");
        cmd->add_option("--seed", cfg.seed, "RNG seed");
        cmd->add_option("--out-dir", out_dir, "Output directory");
    }

    int run(const std::vector<std::string>& argv) {
        OutputDir out(out_dir);
        Manifest manifest = make_manifest("gen", argv, cfg.seed);
        manifest.config = {{"count", std::to_string(count)},
                           {"n_min", std::to_string(cfg.n_min)},
                           {"n_max", std::to_string(cfg.n_max)},
                           {"p_burn", num(cfg.p_burn)},
                           {"p_expand", num(cfg.p_expand)}};
        std::vector<Hypernetwork> batch = generate_batch(cfg, count);
        for (int i = 0; i < count; ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "instance_%04d.hel", i);
            save_hyperedge_list(batch[i], out.path(name));
        }
        finish_manifest(manifest, out);
        return 0;
    }
};

// ---- train --------------------------------------------------------------

struct TrainCmd {
    TrainConfig cfg;
    GenConfig gen_cfg;
    uint64_t seed = 0;
    std::string termination = "fully-fragmented";
    std::string out_dir = ".";

    void attach(CLI::App* cmd) {
        cmd->add_option("--episodes", cfg.episodes, "Max episodes N");
        cmd->add_option("--warmup", cfg.warmup, "Episodes without parameter updates");
        cmd->add_option("--gamma", cfg.gamma, "Reward discount");
        cmd->add_option("--n-step", cfg.n_step, "Multi-step length n");
        cmd->add_option("--epsilon", cfg.epsilon, "Exploration probability");
        cmd->add_option("--target-copy", cfg.target_copy, "Target network copy frequency C");
        cmd->add_option("--buffer", cfg.buffer_capacity, "Experience pool capacity M");
        cmd->add_option("--batch-size", cfg.batch_size, "SGD batch size");
        cmd->add_option("--learning-rate", cfg.learning_rate, "SGD learning rate");
        cmd->add_option("--alpha", cfg.recon_weight, "Reconstruction loss weight");
        cmd->add_option("--val-interval", cfg.validation_interval, "Validation frequency");
        cmd->add_option("--val-size", cfg.validation_size, "Validation set size");
        cmd->add_option("--val-batch-frac", cfg.validation_batch_frac,
                        "Batch fraction for validation dismantling");
        cmd->add_option("--embed-dim", cfg.dims.width, "Embedding dimension");
        cmd->add_option("--layers", cfg.dims.depth, "Number of embedding layers");
        cmd->add_option("--termination", termination, "Episode termination rule")
            ->check(CLI::IsMember({"fully-fragmented", "first-disconnect"}));
        cmd->add_option("--n-min", gen_cfg.n_min, "Generator minimum node count");
        cmd->add_option("--n-max", gen_cfg.n_max, "Generator maximum node count");
        cmd->add_option("--p-burn", gen_cfg.p_burn, "Generator burning probability");
        cmd->add_option("--p-expand", gen_cfg.p_expand, "Generator expanding probability");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--out-dir", out_dir, "Output directory");
    }

    int run(const std::vector<std::string>& argv) {
        cfg.termination = termination == "first-disconnect" ? Termination::FirstDisconnect
                                                            : Termination::FullyFragmented;
        OutputDir out(out_dir);
        Manifest manifest = make_manifest("train", argv, seed);
        manifest.config = {{"episodes", std::to_string(cfg.episodes)},
                           {"warmup", std::to_string(cfg.warmup)},
                           {"gamma", num(cfg.gamma)},
                           {"n_step", std::to_string(cfg.n_step)},
                           {"epsilon", num(cfg.epsilon)},
                           {"target_copy", std::to_string(cfg.target_copy)},
                           {"buffer", std::to_string(cfg.buffer_capacity)},
                           {"batch_size", std::to_string(cfg.batch_size)},
                           {"learning_rate", num(cfg.learning_rate)},
                           {"alpha", num(cfg.recon_weight)},
                           {"val_interval", std::to_string(cfg.validation_interval)},
                           {"val_size", std::to_string(cfg.validation_size)},
                           {"embed_dim", std::to_string(cfg.dims.width)},
                           {"layers", std::to_string(cfg.dims.depth)},
                           {"termination", termination},
                           {"n_min", std::to_string(gen_cfg.n_min)},
                           {"n_max", std::to_string(gen_cfg.n_max)},
                           {"p_burn", num(gen_cfg.p_burn)},
                           {"p_expand", num(gen_cfg.p_expand)}};

        TrainResult result = train(cfg, gen_cfg, seed, [](int episode, double anc_value) {
            std::cerr << "episode " << episode << " validation anc " << format_fixed6(anc_value)
                      << '\n';
        });

        save_checkpoint(result.best_params, out.path("checkpoint.json"));
        std::ofstream curve(out.path("validation.csv"));
        curve << "episode,mean_anc\n";
        curve << "0," << format_fixed6(result.initial_validation_anc) << '\n';
        for (const auto& [episode, anc_value] : result.validation_curve)
            curve << episode << ',' << format_fixed6(anc_value) << '\n';
        finish_manifest(manifest, out);
        return 0;
    }
};

// ---- dismantle ----------------------------------------------------------

struct DismantleCmd {
    InputArgs input;
    StrategyArgs strat;
    std::string strategy_name = "HHDA";
    double batch_frac = 0.01;
    int budget = 0;
    uint64_t seed = 0;
    std::string out_dir = ".";

    void attach(CLI::App* cmd) {
        input.attach(cmd, "hyperedge-list");
        strat.attach(cmd);
        cmd->add_option("--strategy", strategy_name, "Dismantling strategy")
            ->check(CLI::IsMember({"HD", "HDA", "HHD", "HHDA", "CI", "AGENT", "RANDOM"}));
        cmd->add_option("--batch-frac", batch_frac, "Fraction of nodes removed per batch");
        cmd->add_option("--budget", budget, "Stop after this many batches (0 = all nodes)");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--out-dir", out_dir, "Output directory");
    }

    int run(const std::vector<std::string>& argv) {
        OutputDir out(out_dir);
        Manifest manifest = make_manifest("dismantle", argv, seed);
        manifest.input_digests[input.path] = file_digest(input.path);
        manifest.config = {{"strategy", strategy_name},
                           {"batch_frac", num(batch_frac)},
                           {"budget", std::to_string(budget)},
                           {"ci_radius", std::to_string(strat.ci_radius)},
                           {"format", input.format},
                           {"gcc", input.restrict_gcc ? "true" : "false"}};

        LoadResult loaded = input.load();
        write_idmap(loaded, out);
        strat.seed = seed;
        Strategy strategy = strat.make(strategy_from_name(strategy_name));
        DismantleTrace trace = dismantle(loaded.graph, strategy, batch_frac, budget);

        std::ofstream tf(out.path("trace.csv"));
        tf << "step,removed_nodes,normalized_connectivity\n";
        for (int b = 0; b < trace.batches(); ++b) {
            tf << (b + 1) << ',';
            const auto& batch = trace.removed[b];
            for (size_t i = 0; i < batch.size(); ++i) {
                if (i) tf << ' ';
                tf << loaded.original_ids[batch[i]];
            }
            tf << ',' << format_fixed6(trace.normalized_connectivity[b]) << '\n';
        }
        std::ofstream sf(out.path("summary.csv"));
        sf << "strategy,anc,batches,initial_nodes\n";
        sf << trace.strategy << ',' << format_fixed6(anc(trace)) << ',' << trace.batches() << ','
           << loaded.graph.initial_node_count() << '\n';
        finish_manifest(manifest, out);
        return 0;
    }
};

// ---- eval ---------------------------------------------------------------

struct EvalCmd {
    InputArgs input;
    StrategyArgs strat;
    std::string strategies = "HD,HDA,HHD,HHDA,CI";
    double batch_frac = 0.01;
    uint64_t seed = 0;
    std::string out_dir = ".";

    void attach(CLI::App* cmd) {
        input.attach(cmd, "hyperedge-list");
        strat.attach(cmd);
        cmd->add_option("--strategies", strategies, "Comma-separated strategy list");
        cmd->add_option("--batch-frac", batch_frac, "Fraction of nodes removed per batch");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--out-dir", out_dir, "Output directory");
    }

    int run(const std::vector<std::string>& argv) {
        OutputDir out(out_dir);
        Manifest manifest = make_manifest("eval", argv, seed);
        manifest.input_digests[input.path] = file_digest(input.path);
        manifest.config = {{"strategies", strategies},
                           {"batch_frac", num(batch_frac)},
                           {"ci_radius", std::to_string(strat.ci_radius)},
                           {"format", input.format},
                           {"gcc", input.restrict_gcc ? "true" : "false"}};

        LoadResult loaded = input.load();
        write_idmap(loaded, out);
        strat.seed = seed;

        std::vector<std::string> names = split_list(strategies);
        if (names.empty()) throw CLI::ValidationError("--strategies", "empty strategy list");
        std::ofstream f(out.path("anc.csv"));
        for (size_t i = 0; i < names.size(); ++i) f << (i ? "," : "") << names[i];
        f << '\n';
        for (size_t i = 0; i < names.size(); ++i) {
            Strategy s = strat.make(strategy_from_name(names[i]));
            f << (i ? "," : "") << format_fixed6(anc(dismantle(loaded.graph, s, batch_frac)));
        }
        f << '\n';
        finish_manifest(manifest, out);
        return 0;
    }
};

// ---- sir ----------------------------------------------------------------

struct SirCmd {
    InputArgs input;
    StrategyArgs strat;
    SirConfig cfg;
    std::string strategies = "HD,CI,HHD,HHDA";
    std::string ratios = "0,0.05,0.10,0.15,0.20";
    uint64_t seed = 0;
    std::string out_dir = ".";

    void attach(CLI::App* cmd) {
        input.attach(cmd, "contact-timestamps");
        strat.attach(cmd);
        cmd->add_option("--strategies", strategies, "Comma-separated strategy list");
        cmd->add_option("--beta", cfg.beta, "Per-contact per-step infection probability");
        cmd->add_option("--mu", cfg.mu, "Per-step recovery probability");
        cmd->add_option("--reps", cfg.repetitions, "Simulation repetitions")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--ratios", ratios, "Comma-separated immune ratios");
        cmd->add_option("--batch-frac", cfg.rank_batch_frac,
                        "Dismantling batch fraction used for ranking");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--out-dir", out_dir, "Output directory");
    }

    int run(const std::vector<std::string>& argv) {
        OutputDir out(out_dir);
        Manifest manifest = make_manifest("sir", argv, seed);
        manifest.input_digests[input.path] = file_digest(input.path);
        manifest.config = {{"strategies", strategies}, {"beta", num(cfg.beta)},
                           {"mu", num(cfg.mu)},        {"reps", std::to_string(cfg.repetitions)},
                           {"ratios", ratios},         {"batch_frac", num(cfg.rank_batch_frac)},
                           {"format", input.format},   {"gcc", input.restrict_gcc ? "true" : "false"}};

        cfg.immune_ratios.clear();
        for (const std::string& r : split_list(ratios)) cfg.immune_ratios.push_back(std::stod(r));
        if (cfg.immune_ratios.empty())
            throw CLI::ValidationError("--ratios", "empty ratio list");
        cfg.seed = seed;

        LoadResult loaded = input.load();
        write_idmap(loaded, out);
        strat.seed = seed;

        std::vector<std::string> names = split_list(strategies);
        if (names.empty()) throw CLI::ValidationError("--strategies", "empty strategy list");
        std::ofstream f(out.path("containment.csv"));
        f << "strategy";
        for (double r : cfg.immune_ratios) f << ',' << format_fixed6(r);
        f << '\n';
        for (const std::string& name : names) {
            Strategy s = strat.make(strategy_from_name(name));
            ContainmentRow row = containment_table(loaded.graph, s, cfg);
            f << s.name();
            for (double rate : row.mean_infection_rate) f << ',' << format_fixed6(rate);
            f << '\n';
        }
        finish_manifest(manifest, out);
        return 0;
    }
};

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"Hypernetwork dismantling toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Configuration file (key=value, [section] per subcommand)");

    GenCmd gen_cmd;
    TrainCmd train_cmd;
    DismantleCmd dismantle_cmd;
    EvalCmd eval_cmd;
    SirCmd sir_cmd;

    gen_cmd.attach(app.add_subcommand("gen", "Generate synthetic hypernetworks"));
    train_cmd.attach(app.add_subcommand("train", "Train the dismantling agent"));
    dismantle_cmd.attach(app.add_subcommand("dismantle", "Dismantle one hypernetwork"));
    eval_cmd.attach(app.add_subcommand("eval", "Compare strategies by ANC"));
    sir_cmd.attach(app.add_subcommand("sir", "Epidemic containment simulation"));

    std::vector<std::string> full = {"hyperdm"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> cargv;
    cargv.reserve(full.size());
    for (const std::string& s : full) cargv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
        if (app.got_subcommand("gen")) return gen_cmd.run(args);
        if (app.got_subcommand("train")) return train_cmd.run(args);
        if (app.got_subcommand("dismantle")) return dismantle_cmd.run(args);
        if (app.got_subcommand("eval")) return eval_cmd.run(args);
        if (app.got_subcommand("sir")) return sir_cmd.run(args);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace hyperdm::cli
