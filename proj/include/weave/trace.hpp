#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "weave/control.hpp"
#include "weave/generator.hpp"

namespace weave {

using NodeId = std::uint32_t;

namespace events {

struct Generated {
    std::string chunk;
    StopReason stop_reason = StopReason::EndOfOutput;
    std::optional<Exchange> exchange;
    bool operator==(const Generated&) const = default;
};

struct Spawned {
    NodeId child_id = 0;
    std::string child_context;
    bool operator==(const Spawned&) const = default;
};

struct Joined {
    NodeId child_id = 0;
    std::string payload;
    bool operator==(const Joined&) const = default;
};

struct Acted {
    std::string action;
    std::string observation;
    bool operator==(const Acted&) const = default;
};

struct Ended {
    bool operator==(const Ended&) const = default;
};

struct Aborted {
    std::string reason;  // e.g. "LimitExceeded(depth)"
    std::string detail;
    bool operator==(const Aborted&) const = default;
};

struct Warning {
    std::string text;
    bool operator==(const Warning&) const = default;
};

}  // namespace events

using Event = std::variant<events::Generated, events::Spawned, events::Joined, events::Acted, events::Ended,
                           events::Aborted, events::Warning>;

struct NodeStatus {
    enum class State { Running, Completed, Aborted };
    State state = State::Running;
    std::string reason;  // set when Aborted

    static NodeStatus completed() { return {State::Completed, {}}; }
    static NodeStatus aborted(std::string why) { return {State::Aborted, std::move(why)}; }

    /// "Completed", "Running" or "Aborted(<reason>)".
    std::string to_string() const;
    static std::optional<NodeStatus> parse(std::string_view text);

    bool operator==(const NodeStatus&) const = default;
};

struct TraceNode {
    NodeId id = 0;
    std::optional<NodeId> parent_id;
    std::int64_t depth = 0;
    std::string context;
    std::vector<Event> events;
    std::string final_sequence;
    NodeStatus status;

    bool operator==(const TraceNode&) const = default;
};

/// Counters kept by the runtime while the tree is built.
struct RunCounters {
    std::int64_t total_generated_chars = 0;
    std::int64_t generator_calls = 0;
    std::int64_t environment_calls = 0;
    bool operator==(const RunCounters&) const = default;
};

/// What a replay needs to re-execute the run.
struct RunHeader {
    ControlTokens control;
    Limits limits;
    bool has_environment = false;
    bool operator==(const RunHeader&) const = default;
};

class SchemaViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Spawn tree of one task run. Node ids are assigned in spawn order and equal
/// the node's index; node 0 is the root.
class ThreadTree {
public:
    NodeId add_root(std::string context);
    NodeId add_child(NodeId parent, std::string context);
    void append(NodeId id, Event event) { nodes_.at(id).events.push_back(std::move(event)); }

    TraceNode& node(NodeId id) { return nodes_.at(id); }
    const TraceNode& node(NodeId id) const { return nodes_.at(id); }
    const TraceNode& root() const { return nodes_.at(0); }
    const std::vector<TraceNode>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    /// Children in spawn order.
    std::vector<NodeId> children_of(NodeId id) const;

    RunHeader run;
    RunCounters counters;

    bool operator==(const ThreadTree&) const = default;

private:
    friend ThreadTree load_trace(std::string_view bytes);
    std::vector<TraceNode> nodes_;
};

struct DepthStats {
    std::int64_t max_depth_edges = 0;  // root = 0
    std::int64_t max_depth_nodes = 0;  // root = 1
    double avg_depth_edges = 0.0;
    double avg_depth_nodes = 0.0;
};

DepthStats depth_stats(const ThreadTree& tree);

struct Insertion {
    std::size_t position = 0;          // offset in the node's final_sequence
    std::int64_t subtree_chars = 0;    // generated chars in the joined child's subtree
    NodeId child_id = 0;
    bool operator==(const Insertion&) const = default;
};

/// One entry per Joined event of the node.
std::vector<Insertion> supplemental_work(const ThreadTree& tree, NodeId node);

/// Sum of Generated chunk lengths over the node and all its descendants.
std::int64_t subtree_generated_chars(const ThreadTree& tree, NodeId node);

/// Rebuilds a node's sequence from its events alone: each chunk (cut after the
/// end token if present; followed by the listen token when it halted on
/// Listen) and, at each listen point, payload or observation plus the close token.
std::string reconstruct_sequence(const TraceNode& node, const ControlTokens& control);

/// {"version": 1, "run": {...}, "nodes": [...], "metrics": {...}}, stable key order.
std::string export_trace(const ThreadTree& tree);
/// Throws SchemaViolation on malformed input or a tree that is not well formed.
ThreadTree load_trace(std::string_view bytes);
/// Throws SchemaViolation.
void validate_tree(const ThreadTree& tree);

/// One line per node in depth-first spawn order.
std::string render_ascii(const ThreadTree& tree);

}  // namespace weave
