#include "cja/cli.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cja/analysis.hpp"
#include "cja/errors.hpp"
#include "cja/graph_io.hpp"
#include "cja/learner.hpp"
#include "cja/mdp.hpp"
#include "cja/report.hpp"
#include "cja/synthetic.hpp"

namespace cja::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// Exit 1 marks a run that was well-formed but found nothing usable; every
// other library error is an input problem and exits 2.
int exit_code_for(const Error& e) {
    static const std::set<std::string> analysis_level = {
        "unreachable",    "loop_detected",           "no_admissible_action",
        "empty_path_set", "no_reachable_initial_nodes", "empty_two_hop",
    };
    return analysis_level.count(e.code()) ? 1 : 2;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("io_error", "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
        throw Error("io_error", "cannot read " + path.string());
    return buffer.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("io_error", "cannot open " + path.string() +
                                    " for writing");
    out << content;
    out.flush();
    if (!out)
        throw Error("io_error", "cannot write " + path.string());
}

json parse_config_file(const fs::path& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw Error("bad_config",
                    "bad config " + path.string() + ": " + e.what());
    }
}

TerrainConfig load_terrain(const std::string& path) {
    if (path.empty())
        return TerrainConfig{};
    return terrain_from_json(parse_config_file(path));
}

LearnerConfig load_learner(const std::string& path,
                           std::optional<std::uint64_t> seed) {
    LearnerConfig config;
    if (!path.empty())
        config = learner_from_json(parse_config_file(path));
    if (seed)
        config.seed = *seed;
    return config;
}

AttackGraph load_graph(const fs::path& dir, std::ostream& err) {
    std::vector<std::string> warnings;
    AttackGraph graph = load_graph_dir(dir, &warnings);
    for (const std::string& w : warnings)
        err << "warning: " << w << "\n";
    return graph;
}

std::string join_ids(const std::vector<int>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i)
            out += ", ";
        out += std::to_string(ids[i]);
    }
    return out.empty() ? std::string("none") : out;
}

// Shortest round-trip decimal form, same as the JSON artifacts use.
std::string show(double x) { return json(x).dump(); }

struct ValidateArgs {
    std::string graph_dir;
};

int cmd_validate(const ValidateArgs& args, std::ostream& out,
                 std::ostream& err) {
    AttackGraph graph = load_graph(args.graph_dir, err);
    std::size_t annotated = 0;
    for (const Vertex& v : graph.vertices())
        annotated += v.annotation.has_value();
    out << "vertices: " << graph.vertices().size()
        << ", edges: " << graph.edges().size() << "\n";
    out << "annotated: " << annotated << "/" << graph.vertices().size()
        << " vertices\n";
    out << "crown jewels: " << join_ids(graph.crown_jewels()) << "\n";
    out << "initial candidates: " << join_ids(graph.candidate_initial_nodes())
        << "\n";
    return 0;
}

struct GenerateArgs {
    int vertices = 0;
    int edges = 0;
    int subnets = 1;
    std::uint64_t seed = 0;
    std::string out_dir;
};

int cmd_generate(const GenerateArgs& args, std::ostream& out,
                 std::ostream& err) {
    AttackGraph graph =
        generate_synthetic(args.vertices, args.edges, args.subnets, args.seed);
    fs::create_directories(args.out_dir);
    write_graph_dir(graph, args.out_dir);
    err << "wrote " << args.out_dir << "\n";
    out << "generated " << graph.vertices().size() << " vertices, "
        << graph.edges().size() << " edges, " << args.subnets << " subnets\n";
    return 0;
}

struct TrainArgs {
    std::string graph_dir;
    std::string terrain_path;
    std::string learner_path;
    int initial = 0;
    int goal = 0;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
    AttackGraph graph = load_graph(args.graph_dir, err);
    TerrainConfig terrain = load_terrain(args.terrain_path);
    LearnerConfig learner = load_learner(args.learner_path, args.seed);

    Mdp mdp = compile_mdp(graph, args.initial, args.goal, terrain);
    TrainResult result = train(mdp, args.initial, learner);

    fs::create_directories(args.out_dir);
    write_text_file(fs::path(args.out_dir) / "episodes.csv",
                    episode_returns_csv(result.episode_returns));
    if (result.converged_at)
        err << "converged at episode " << *result.converged_at << "\n";
    else
        err << "no convergence within " << result.episode_returns.size()
            << " episodes\n";

    // The greedy path may cycle when shaping made loitering profitable;
    // the episode log is still written for inspection.
    AttackPath path = extract_path(result.qtable, mdp, args.initial);

    ordered_json doc;
    doc["path"] = path_to_json(path);
    doc["converged_at"] =
        result.converged_at ? ordered_json(*result.converged_at) : nullptr;
    doc["episodes"] = result.episode_returns.size();
    write_text_file(fs::path(args.out_dir) / "path.json", doc.dump(2) + "\n");

    out << "path:";
    for (int v : path.vertices)
        out << " " << v;
    out << " (hops " << path.hops << ", reward " << show(path.reward) << ")\n";
    return 0;
}

struct AnalyzeArgs {
    std::string graph_dir;
    std::string terrain_path;
    std::string learner_path;
    std::vector<int> cjs;
    std::vector<int> initials;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    bool emit_dot = false;
    int jobs = 1;
};

struct CjOutcome {
    int cj = 0;
    std::optional<CjaReport> report;
    std::string error;
};

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out,
                std::ostream& err) {
    AttackGraph graph = load_graph(args.graph_dir, err);
    TerrainConfig terrain = load_terrain(args.terrain_path);
    LearnerConfig learner = load_learner(args.learner_path, args.seed);

    RunManifest manifest;
    manifest.graph_dir = args.graph_dir;
    manifest.out_dir = args.out_dir;
    manifest.seed = args.seed;
    manifest.emit_dot = args.emit_dot;
    manifest.jobs = std::max(args.jobs, 1);
    manifest.crown_jewels =
        args.cjs.empty() ? graph.crown_jewels() : args.cjs;
    manifest.initial_candidates = args.initials.empty()
                                      ? graph.candidate_initial_nodes()
                                      : args.initials;
    for (std::vector<int>* ids :
         {&manifest.crown_jewels, &manifest.initial_candidates}) {
        std::sort(ids->begin(), ids->end());
        ids->erase(std::unique(ids->begin(), ids->end()), ids->end());
        for (int id : *ids)
            graph.index_of(id);
    }
    if (manifest.crown_jewels.empty())
        throw Error("bad_config", "no crown jewels: none on the graph and "
                                  "none given with --cj");
    if (manifest.initial_candidates.empty())
        throw Error("bad_config", "no initial candidates: none on the graph "
                                  "and none given with --initial");

    fs::create_directories(manifest.out_dir);

    std::vector<CjOutcome> outcomes;
    for (int cj : manifest.crown_jewels) {
        CjOutcome outcome;
        outcome.cj = cj;
        try {
            outcome.report =
                run_cja(graph, cj, manifest.initial_candidates, terrain,
                        learner, manifest.jobs);
        } catch (const Error& e) {
            if (exit_code_for(e) != 1)
                throw;
            outcome.error = e.code();
        }
        fs::path report_path =
            manifest.out_dir / ("cja_" + std::to_string(cj) + ".json");
        if (outcome.report) {
            const CjaReport& r = *outcome.report;
            write_text_file(report_path, report_to_json(r).dump(2) + "\n");
            if (manifest.emit_dot) {
                fs::path dot_path =
                    manifest.out_dir / ("cja_" + std::to_string(cj) + ".dot");
                write_text_file(dot_path, emit_dot(graph, r.paths));
            }
            err << "cj " << cj << ": " << r.paths.size() << " paths, "
                << r.failures.size() << " failed pairs\n";
            if (r.best_initial) {
                out << "cj " << cj << ": best_initial=" << *r.best_initial
                    << " best_terminal=" << *r.best_terminal
                    << " most_visited=" << *r.most_visited << " (proportion "
                    << show(r.most_visited_proportion) << ")\n";
            } else {
                out << "cj " << cj << ": no successful paths\n";
            }
        } else {
            ordered_json doc;
            doc["crown_jewel"] = cj;
            doc["error"] = outcome.error;
            write_text_file(report_path, doc.dump(2) + "\n");
            err << "cj " << cj << ": " << outcome.error << "\n";
            out << "cj " << cj << ": no successful paths\n";
        }
        outcomes.push_back(std::move(outcome));
    }

    std::vector<CjaReport> successes;
    for (const CjOutcome& o : outcomes)
        if (o.report)
            successes.push_back(*o.report);
    MultiCjSummary summary = summarize_multi_cj(std::move(successes));

    // Splice error rows into the library serialization so successful rows
    // stay byte-identical to summary_to_json output.
    ordered_json doc = summary_to_json(summary);
    ordered_json rows = ordered_json::array();
    std::size_t next_success = 0;
    for (const CjOutcome& o : outcomes) {
        if (o.report) {
            rows.push_back(doc["crown_jewels"][next_success++]);
        } else {
            ordered_json row;
            row["crown_jewel"] = o.cj;
            row["error"] = o.error;
            rows.push_back(row);
        }
    }
    doc["crown_jewels"] = rows;
    write_text_file(manifest.out_dir / "summary.json", doc.dump(2) + "\n");

    if (summary.global_best_initial)
        out << "global best initial: " << *summary.global_best_initial << "\n";
    else
        out << "global best initial: none\n";

    bool every_cj_has_a_path = true;
    for (const CjOutcome& o : outcomes)
        every_cj_has_a_path =
            every_cj_has_a_path && o.report && !o.report->paths.empty();
    return every_cj_has_a_path ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Crown jewel analysis over annotated attack graphs"};
    app.require_subcommand(1);

    ValidateArgs validate_args;
    CLI::App* validate =
        app.add_subcommand("validate", "Parse and validate a graph directory");
    validate->add_option("--graph-dir", validate_args.graph_dir,
                         "Directory with vertices.csv, arcs.csv, "
                         "annotations.json")
        ->required();

    GenerateArgs generate_args;
    CLI::App* generate =
        app.add_subcommand("generate", "Generate a synthetic attack graph");
    generate->add_option("--vertices", generate_args.vertices, "Vertex count")
        ->required();
    generate->add_option("--edges", generate_args.edges, "Edge count")
        ->required();
    generate->add_option("--subnets", generate_args.subnets,
                         "Subnet count (firewalls sit between subnets)");
    generate->add_option("--seed", generate_args.seed, "Generator seed");
    generate->add_option("--out", generate_args.out_dir, "Output directory")
        ->required();

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand(
        "train", "Train one agent for an (initial, goal) pair");
    train->add_option("--graph-dir", train_args.graph_dir, "Graph directory")
        ->required();
    train->add_option("--terrain", train_args.terrain_path,
                      "Terrain config JSON");
    train->add_option("--learner", train_args.learner_path,
                      "Learner config JSON");
    train->add_option("--initial", train_args.initial, "Initial vertex id")
        ->required();
    train->add_option("--goal", train_args.goal, "Goal vertex id")->required();
    std::uint64_t train_seed = 0;
    CLI::Option* train_seed_opt =
        train->add_option("--seed", train_seed,
                          "Seed override (wins over the learner config)");
    train->add_option("--out", train_args.out_dir, "Output directory")
        ->required();

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Run crown jewel analysis end to end");
    analyze->add_option("--graph-dir", analyze_args.graph_dir,
                        "Graph directory")
        ->required();
    analyze->add_option("--terrain", analyze_args.terrain_path,
                        "Terrain config JSON");
    analyze->add_option("--learner", analyze_args.learner_path,
                        "Learner config JSON");
    analyze->add_option("--cj", analyze_args.cjs,
                        "Crown jewel id (repeatable; default: the graph's)");
    analyze->add_option("--initial", analyze_args.initials,
                        "Initial candidate id (repeatable; default: the "
                        "graph's)");
    std::uint64_t analyze_seed = 0;
    CLI::Option* analyze_seed_opt =
        analyze->add_option("--seed", analyze_seed,
                            "Seed override (wins over the learner config)");
    analyze->add_option("--out", analyze_args.out_dir, "Output directory")
        ->required();
    analyze->add_flag("--emit-dot", analyze_args.emit_dot,
                      "Also write a DOT rendering per crown jewel");
    analyze->add_option("--jobs", analyze_args.jobs,
                        "Worker threads for pair training");

    std::vector<const char*> argv;
    argv.push_back("cja");
    for (const std::string& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }
    if (train_seed_opt->count())
        train_args.seed = train_seed;
    if (analyze_seed_opt->count())
        analyze_args.seed = analyze_seed;

    try {
        if (validate->parsed())
            return cmd_validate(validate_args, out, err);
        if (generate->parsed())
            return cmd_generate(generate_args, out, err);
        if (train->parsed())
            return cmd_train(train_args, out, err);
        return cmd_analyze(analyze_args, out, err);
    } catch (const Error& e) {
        err << "error [" << e.code() << "]: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace cja::cli
