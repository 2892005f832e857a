// Acceptance report: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "support/expr_gen.hpp"
#include "support/fixtures.hpp"
#include "support/random_program.hpp"
#include "support/transcript_cases.hpp"
#include "weave/batch.hpp"
#include "weave/craft_planner.hpp"
#include "weave/craftworld.hpp"
#include "weave/http_generator.hpp"
#include "weave/mock_server.hpp"
#include "weave/replay.hpp"
#include "weave/runtime.hpp"

using namespace weave;
using namespace weave::testing;

namespace {

constexpr double kGoldenRunSeconds = 1.0;
constexpr int kGoldenRepeats = 5;
constexpr int kOracleWorlds = 100;
constexpr double kOracleSeconds = 10.0;
constexpr std::uint64_t kRandomRuns = 1000;
constexpr int kMiniExprCases = 2000;
constexpr int kMiniExprMinEvaluated = 1000;
constexpr std::size_t kMinTranscriptCases = 10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = false;
    std::string detail;
};

/// Every trace produced below, for the replay criterion.
std::vector<ThreadTree> g_traces;

Verdict golden_clean_apple() {
    std::string first;
    double slowest = 0.0;
    for (int i = 0; i < kGoldenRepeats; ++i) {
        const auto t0 = Clock::now();
        const auto r = run_scenario("alfworld_clean_apple");
        slowest = std::max(slowest, seconds_since(t0));
        const auto& t = r.trace;
        if (!r.completed()) return {false, "run aborted: " + r.abort->to_string()};
        if (r.env_success != std::optional<bool>(true)) return {false, "environment not solved"};
        const bool shape = t.size() == 11 && t.children_of(0) == std::vector<NodeId>{1, 9, 10} &&
                           t.children_of(1).size() == 7 && t.children_of(9).empty() && t.children_of(10).empty();
        if (!shape) return {false, "spawn structure differs (" + std::to_string(t.size()) + " nodes)"};
        for (NodeId c : t.children_of(1)) {
            if (!t.children_of(c).empty()) return {false, "check-location thread has children"};
        }
        const auto bytes = export_trace(t);
        if (i == 0) first = bytes;
        else if (bytes != first) return {false, "trace bytes differ on repeat " + std::to_string(i)};
        if (i == 0) g_traces.push_back(t);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "11 nodes main->{find->7 checks, clean, put}; %d identical traces; slowest run %.3f s (< %.1f)",
                  kGoldenRepeats, slowest, kGoldenRunSeconds);
    return {slowest < kGoldenRunSeconds, buf};
}

Verdict golden_dark_oak_sign() {
    const auto dir = scenario_dir("textcraft_dark_oak_sign");
    const auto cfg = ConfigFile::load(dir / "config.json");
    auto gen = cfg.make_generator();
    auto env = cfg.make_environment();
    auto* world = dynamic_cast<CraftWorld*>(env.get());
    if (!world) return {false, "environment is not a craft world"};
    if (world->crafting_commands().size() != 8) return {false, "world does not hold 8 crafting commands"};
    const auto r = run_task(world->task_header() + read_file(dir / "task.txt"), cfg.run(), *gen, env.get());
    g_traces.push_back(r.trace);
    if (!r.completed()) return {false, "run aborted: " + r.abort->to_string()};
    if (r.env_success != std::optional<bool>(true)) return {false, "goal not crafted"};
    const auto signs = world->count("dark oak sign");
    if (signs < 1) return {false, "no dark oak sign in inventory"};

    std::vector<std::string> observations;
    for (const auto& n : r.trace.nodes()) {
        for (const auto& ev : n.events) {
            if (const auto* a = std::get_if<events::Acted>(&ev)) observations.push_back(a->observation);
        }
    }
    auto seen = [&](const std::string& s) { return std::find(observations.begin(), observations.end(), s) != observations.end(); };
    for (const char* literal : {"Crafted 3 minecraft:dark oak sign.", "Could not find dark oak planks.",
                                "Crafted 4 minecraft:dark oak planks.", "Could not find stick."}) {
        if (!seen(literal)) return {false, std::string("missing observation \"") + literal + "\""};
    }
    return {true, std::to_string(signs) + " dark oak sign crafted; " + std::to_string(observations.size()) +
                      " observations incl. \"Crafted 3 minecraft:dark oak sign.\" and \"Could not find dark oak planks.\""};
}

Verdict oracle_equivalence() {
    const auto t0 = Clock::now();
    int agree = 0, reachable = 0;
    for (int seed = 0; seed < kOracleWorlds; ++seed) {
        const auto w = random_craft_world(static_cast<std::uint64_t>(seed));
        const bool oracle = craftable_oracle(w.recipes(), w.gettable(), w.goal());
        const bool executed = bfs_plan_execute(w).reached;
        agree += oracle == executed;
        reachable += oracle;
    }
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%d worlds agree (%d reachable); %.3f s (< %.1f)", agree, kOracleWorlds, reachable,
                  secs, kOracleSeconds);
    return {agree == kOracleWorlds && secs < kOracleSeconds, buf};
}

Verdict reconstruction() {
    std::size_t nodes_checked = 0, violations = 0, runs = 0;
    for (std::uint64_t seed = 0; seed < kRandomRuns; ++seed) {
        const auto program = make_random_program(seed, ProgramShape{4, 4, seed % 5 == 0 ? 0.15 : 0.0});
        ScriptedGenerator gen(program.playbook);
        EchoEnvironment env;
        RunConfig cfg;
        cfg.limits = random_limits(seed, program);
        const auto r = run_task(program.seed, cfg, gen, &env);
        ++runs;
        for (const auto& n : r.trace.nodes()) {
            for (std::size_t other = 0; other < program.threads.size(); ++other) {
                if (other != n.id && n.final_sequence.find(sentinel(static_cast<int>(other))) != std::string::npos) {
                    ++violations;
                }
            }
            if (n.status != NodeStatus::completed()) continue;
            ++nodes_checked;
            if (reconstruct_sequence(n, r.trace.run.control) != n.final_sequence ||
                n.final_sequence != program.threads[n.id].expected_sequence) {
                ++violations;
            }
        }
        g_traces.push_back(r.trace);
    }
    return {violations == 0 && runs >= kRandomRuns,
            std::to_string(runs) + " randomized runs, " + std::to_string(nodes_checked) + " completed threads, " +
                std::to_string(violations) + " violations"};
}

Verdict phi_psi() {
    const auto cases = transcript_cases();
    std::size_t ok = 0;
    std::string first_bad;
    for (const auto& c : cases) {
        if (c.actual() == c.expected) ++ok;
        else if (first_bad.empty()) first_bad = c.name;
    }
    const auto sweep = miniexpr_sweep(20240611, kMiniExprCases);
    std::string detail = std::to_string(ok) + "/" + std::to_string(cases.size()) + " transcript cases byte-exact; MiniExpr " +
                         std::to_string(sweep.evaluated) + " evaluated + " + std::to_string(sweep.rejected) +
                         " rejected, " + std::to_string(sweep.mismatches) + " mismatches";
    if (!first_bad.empty()) detail += "; first failing case: " + first_bad;
    return {ok == cases.size() && cases.size() >= kMinTranscriptCases && sweep.mismatches == 0 &&
                sweep.evaluated >= kMiniExprMinEvaluated,
            detail};
}

Verdict limits() {
    struct Case {
        const char* label;
        Playbook playbook;
        Limits limits;
        AbortReason expect;
    };
    std::vector<Case> cases;

    Playbook chain;
    for (int k = 0; k < 11; ++k) chain.on_suffix("\nlevel " + std::to_string(k), "\nlevel " + std::to_string(k + 1) + " ");
    chain.on_suffix("\nlevel 11", "\nprint('bottom')\n#END#", StopReason::EndOfOutput);
    cases.push_back({"depth 11 > 10", chain, Limits{}, AbortReason::exceeded(LimitKind::Depth)});

    Playbook chatty;
    chatty.on_pattern("level 0$|<=$", "\n> wait ");
    Limits calls;
    calls.max_generator_calls_total = 25;
    cases.push_back({"calls > 25", chatty, calls, AbortReason::exceeded(LimitKind::GeneratorCalls)});

    Playbook big;
    big.on_suffix("\nlevel 0", "\n" + std::string(5000, 'x') + "\n#END#", StopReason::EndOfOutput);
    cases.push_back({"chunk > 4096", big, Limits{}, AbortReason::exceeded(LimitKind::ChunkChars)});

    std::string detail;
    bool pass = true;
    for (const auto& c : cases) {
        ScriptedGenerator gen(std::make_shared<Playbook>(c.playbook));
        EchoEnvironment env;
        RunConfig cfg;
        cfg.limits = c.limits;
        const auto r = run_task("level 0", cfg, gen, &env);
        bool ok = r.abort == std::optional<AbortReason>(c.expect);
        try {
            const auto loaded = load_trace(export_trace(r.trace));
            ok = ok && loaded == r.trace;
        } catch (const SchemaViolation&) {
            ok = false;
        }
        g_traces.push_back(r.trace);
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += std::string(c.label) + " -> " + (r.abort ? r.abort->to_string() : "Completed") +
                  (ok ? " (trace loads)" : " (WRONG)");
    }
    return {pass, detail};
}

Verdict replay_all() {
    std::size_t identical = 0;
    for (const auto& t : g_traces) identical += replay_trace(load_trace(export_trace(t))).identical;
    return {!g_traces.empty() && identical == g_traces.size(),
            std::to_string(identical) + "/" + std::to_string(g_traces.size()) + " traces replay identical"};
}

Verdict http_backend() {
    auto pb = std::make_shared<Playbook>();
    pb->on_suffix("stop?", "\n> look => cut here", StopReason::EndOfOutput)
        .on_suffix("length?", "truncated", StopReason::Length)
        .on_suffix("end?", "\n#END#", StopReason::EndOfOutput);
    MockCompletionServer probe(pb);
    probe.start();
    HttpBackendConfig hc;
    hc.url = probe.url();
    hc.model = "mock";
    hc.timeout_seconds = 5;
    HttpGenerator gen(hc);
    GeneratorCall call;
    call.stop_sequences = {"=>"};
    std::string mapping;
    bool ok = true;
    try {
        for (auto [prompt, want] : {std::pair{"stop?", StopReason::Listen}, std::pair{"length?", StopReason::Length},
                                    std::pair{"end?", StopReason::EndOfOutput}}) {
            call.full_prompt = prompt;
            const auto r = gen.generate(call);
            ok = ok && r.stop_reason == want && r.chunk.find("=>") == std::string::npos;
            mapping += std::string(mapping.empty() ? "" : ", ") + prompt + "->" + std::string(to_string(r.stop_reason));
        }
    } catch (const std::exception& e) {
        return {false, std::string("backend call failed: ") + e.what()};
    }
    probe.stop();

    const auto dir = scenario_dir("alfworld_clean_apple");
    auto book = std::make_shared<const Playbook>(Playbook::load((dir / "playbook.json").string()));
    MockCompletionServer server(book);
    server.start();
    hc.url = server.url();
    HttpGenerator task_gen(hc);
    const auto cfg = ConfigFile::load(dir / "config.json");
    auto env = cfg.make_environment();
    const auto r = run_task(read_file(dir / "task.txt"), cfg.run(), task_gen, env.get());
    g_traces.push_back(r.trace);
    const bool e2e = r.completed() && r.env_success == std::optional<bool>(true) && r.trace.size() == 11;
    return {ok && e2e, "finish reasons " + mapping + "; end-to-end over HTTP: " +
                           (r.completed() ? "Completed" : r.abort->to_string()) + ", " +
                           std::to_string(server.requests_served()) + " requests"};
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        std::function<Verdict()> check;
        Verdict verdict;
    };
    // Replay runs last so it covers the traces of every other criterion.
    std::vector<Criterion> criteria = {
        {1, "golden replay clean-apple", golden_clean_apple, {}},
        {2, "golden replay dark-oak-sign", golden_dark_oak_sign, {}},
        {3, "oracle equivalence", oracle_equivalence, {}},
        {4, "sequence reconstruction", reconstruction, {}},
        {5, "context/payload conformance", phi_psi, {}},
        {6, "limit enforcement", limits, {}},
        {8, "http backend conformance", http_backend, {}},
        {7, "replay determinism", replay_all, {}},
    };
    for (auto& c : criteria) {
        try {
            c.verdict = c.check();
        } catch (const std::exception& e) {
            c.verdict = {false, std::string("exception: ") + e.what()};
        }
    }
    std::sort(criteria.begin(), criteria.end(), [](const auto& a, const auto& b) { return a.number < b.number; });
    int failed = 0;
    for (const auto& c : criteria) {
        failed += !c.verdict.pass;
        std::printf("%s [%d] %s: %s\n", c.verdict.pass ? "PASS" : "FAIL", c.number, c.name, c.verdict.detail.c_str());
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
