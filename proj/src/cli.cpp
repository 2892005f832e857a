#include "weave/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>

#include <CLI11.hpp>

#include "weave/config.hpp"
#include "weave/replay.hpp"
#include "weave/runtime.hpp"
#include "weave/trace.hpp"

namespace weave {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string stamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void print_depth(std::ostream& out, const ThreadTree& tree) {
    const auto s = depth_stats(tree);
    out << "nodes=" << tree.size() << "\n"
        << "max_depth_edges=" << s.max_depth_edges << "\n"
        << "max_depth_nodes=" << s.max_depth_nodes << "\n"
        << "avg_depth_edges=" << fixed6(s.avg_depth_edges) << "\n"
        << "avg_depth_nodes=" << fixed6(s.avg_depth_nodes) << "\n";
}

struct RunArgs {
    std::string config;
    std::string task;
    std::string out;
    bool quiet = false;
    bool verbose = false;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
    auto log = [&](const std::string& msg) {
        if (a.verbose) err << "[" << stamp() << "] " << msg << "\n";
    };
    ConfigFile cfg;
    std::string task;
    std::unique_ptr<Generator> generator;
    std::unique_ptr<Environment> environment;
    try {
        cfg = ConfigFile::load(a.config);
        task = a.task.starts_with("@") ? read_file(a.task.substr(1)) : a.task;
        if (task.empty()) throw ConfigError("task text is empty");
        generator = cfg.make_generator();
        environment = cfg.make_environment();
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    log("config loaded");
    const std::string seed = (environment ? environment->task_header() : std::string()) + task;
    const auto result = run_task(seed, cfg.run(), *generator, environment.get());
    log("run finished after " + std::to_string(result.trace.counters.generator_calls) + " generator calls");

    {
        std::ofstream f(a.out, std::ios::binary);
        f << export_trace(result.trace);
        if (!f) {
            err << "cannot write trace to " << a.out << "\n";
            return kExitConfig;
        }
    }
    log("trace written to " + a.out);

    if (!a.quiet) {
        out << "status=" << result.trace.root().status.to_string() << "\n";
        if (result.final_answer) out << "final_answer=" << *result.final_answer << "\n";
        if (result.env_success) out << "success=" << (*result.env_success ? "true" : "false") << "\n";
        print_depth(out, result.trace);
    }
    if (result.abort) {
        err << "aborted: " << result.abort->to_string() << " at node " << *result.failed_node << ": " << result.detail
            << "\n";
        return kExitAborted;
    }
    return kExitOk;
}

bool load(const std::string& path, ThreadTree& tree, std::ostream& err) {
    try {
        tree = load_trace(read_file(path));
        return true;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const SchemaViolation& e) {
        err << "schema violation: " << e.what() << "\n";
    }
    return false;
}

int cmd_replay(const std::string& path, std::ostream& out, std::ostream& err) {
    ThreadTree tree;
    if (!load(path, tree, err)) return kExitConfig;
    const auto report = replay_trace(tree);
    if (report.identical) {
        out << "identical\n";
        return kExitOk;
    }
    out << "diverged at offset " << *report.divergence_offset << "\n";
    return kExitAborted;
}

int cmd_stats(const std::string& path, std::ostream& out, std::ostream& err) {
    ThreadTree tree;
    if (!load(path, tree, err)) return kExitConfig;
    print_depth(out, tree);
    out << "total_generated_chars=" << tree.counters.total_generated_chars << "\n"
        << "generator_calls=" << tree.counters.generator_calls << "\n"
        << "environment_calls=" << tree.counters.environment_calls << "\n\n";

    out << "node\tparent\tdepth\tstatus\tgenerated\tsubtree_generated\n";
    for (const auto& n : tree.nodes()) {
        std::int64_t own = 0;
        for (const auto& ev : n.events) {
            if (const auto* g = std::get_if<events::Generated>(&ev)) own += static_cast<std::int64_t>(g->chunk.size());
        }
        out << n.id << "\t" << (n.parent_id ? std::to_string(*n.parent_id) : "-") << "\t" << n.depth << "\t"
            << n.status.to_string() << "\t" << own << "\t" << subtree_generated_chars(tree, n.id) << "\n";
    }
    out << "\nnode\tchild\tposition\tsupplemental_chars\n";
    for (const auto& n : tree.nodes()) {
        for (const auto& ins : supplemental_work(tree, n.id)) {
            out << n.id << "\t" << ins.child_id << "\t" << ins.position << "\t" << ins.subtree_chars << "\n";
        }
    }
    return kExitOk;
}

int cmd_show(const std::string& path, std::ostream& out, std::ostream& err) {
    ThreadTree tree;
    if (!load(path, tree, err)) return kExitConfig;
    out << render_ascii(tree);
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Recursive thread runtime for language-model generation", "weave"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Execute one task and write its trace");
    run->add_option("--config", run_args.config, "Run configuration JSON")->required();
    run->add_option("--task", run_args.task, "Task text, or @FILE")->required();
    run->add_option("--out", run_args.out, "Trace output path")->required();
    run->add_flag("--quiet", run_args.quiet, "Print nothing on success");
    run->add_flag("--verbose", run_args.verbose, "Timestamped progress on stderr");

    std::string trace_path;
    auto* replay = app.add_subcommand("replay", "Re-execute a trace and compare bytes");
    replay->add_option("--trace", trace_path, "Trace file")->required();
    auto* stats = app.add_subcommand("stats", "Depth statistics and supplemental work");
    stats->add_option("--trace", trace_path, "Trace file")->required();
    auto* show = app.add_subcommand("show", "Render the thread tree");
    show->add_option("--trace", trace_path, "Trace file")->required();

    std::vector<const char*> argv{"weave"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    if (run->parsed()) return cmd_run(run_args, out, err);
    if (replay->parsed()) return cmd_replay(trace_path, out, err);
    if (stats->parsed()) return cmd_stats(trace_path, out, err);
    return cmd_show(trace_path, out, err);
}

}  // namespace weave
