#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "weave/control.hpp"
#include "weave/environment.hpp"
#include "weave/generator.hpp"
#include "weave/trace.hpp"
#include "weave/variables.hpp"

namespace weave {

/// Prompt q per depth class: one prompt for every thread, or a main prompt
/// for depth 0 and a sub prompt for all deeper threads.
class PromptSet {
public:
    static PromptSet uniform(std::string all);
    static PromptSet split(std::string main, std::string sub);

    const std::string& for_depth(std::int64_t depth) const noexcept;
    bool is_split() const noexcept { return sub_.has_value(); }

private:
    std::string main_;
    std::optional<std::string> sub_;
};

struct RunConfig {
    PromptSet prompts = PromptSet::uniform({});
    ControlTokens control;
    Limits limits;

    /// Throws std::invalid_argument.
    void validate() const;
};

enum class AbortKind { LimitExceeded, GeneratorFailure, EnvironmentFailure, MalformedGeneration, MalformedChildOutput };
enum class LimitKind { Depth, GeneratorCalls, ChunkChars, Children };

std::string_view to_string(LimitKind kind) noexcept;

struct AbortReason {
    AbortKind kind = AbortKind::MalformedGeneration;
    LimitKind limit = LimitKind::Depth;  // meaningful for LimitExceeded only

    static AbortReason exceeded(LimitKind k) { return {AbortKind::LimitExceeded, k}; }
    /// "LimitExceeded(depth)", "GeneratorFailure", ...
    std::string to_string() const;
    bool operator==(const AbortReason&) const = default;
};

/// Fatal condition raised inside a thread; unwinds through every ancestor.
class RunError : public std::runtime_error {
public:
    RunError(AbortReason reason, NodeId node, std::string detail);

    const AbortReason& reason() const noexcept { return reason_; }
    NodeId node() const noexcept { return node_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    AbortReason reason_;
    NodeId node_;
    std::string detail_;
};

struct ThreadState {
    NodeId id = 0;
    std::int64_t depth = 0;
    std::string context;
    std::string sequence;
    VariableStore store;
    /// Names bound by this thread's own assignment lines; a join never overwrites them.
    std::set<std::string, std::less<>> own_names;
    std::vector<NodeId> children;
};

struct ThreadOutcome {
    std::string final_sequence;
    VariableStore exported_bindings;
    NodeStatus status;
};

/// Appends psi(child) + close token to the parent's sequence and merges the
/// child's bindings. Returns the payload. Throws ParseError(MalformedChildOutput).
std::string join_child(ThreadState& parent, const ThreadOutcome& child, const ControlTokens& control);

/// Executes threads of one task run; owns no state beyond the references it is given.
class ThreadRunner {
public:
    ThreadRunner(const RunConfig& config, Generator& generator, Environment* environment, ThreadTree& trace)
        : config_(config), generator_(generator), environment_(environment), trace_(trace) {}

    /// Runs the thread already registered as `node` in the trace to completion.
    /// Throws RunError; the trace then holds the partial run.
    ThreadOutcome run_thread(NodeId node, VariableStore inherited = {});

private:
    GeneratorReturn call_generator(const ThreadState& t);
    void spawn(ThreadState& t, const Spawn& s);
    void act(ThreadState& t, const Action& a);
    [[noreturn]] void fail(const ThreadState& t, AbortReason reason, std::string detail) const;
    void warn_unresolved(const ThreadState& t, const std::vector<std::string>& names);

    const RunConfig& config_;
    Generator& generator_;
    Environment* environment_;
    ThreadTree& trace_;
};

struct TaskResult {
    ThreadOutcome main;
    ThreadTree trace;
    std::optional<std::string> final_answer;
    std::optional<bool> env_success;  // absent without an environment
    std::optional<AbortReason> abort;
    std::optional<NodeId> failed_node;
    std::string detail;

    bool completed() const noexcept { return !abort.has_value(); }
};

/// Runs the main thread with context `seed` (c0) and Y empty. Aborts are
/// returned in the result, never thrown; the trace is always complete up to
/// the failure point.
TaskResult run_task(const std::string& seed, const RunConfig& config, Generator& generator,
                    Environment* environment = nullptr);

}  // namespace weave
