#include "weave/trace.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include <json.hpp>

namespace weave {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

namespace {

constexpr int kTraceVersion = 1;
constexpr std::size_t kRenderContextChars = 40;

[[noreturn]] void violation(const std::string& what) { throw SchemaViolation(what); }

ojson event_to_json(const Event& ev) {
    return std::visit(
        [](const auto& e) -> ojson {
            using T = std::decay_t<decltype(e)>;
            ojson j;
            if constexpr (std::is_same_v<T, events::Generated>) {
                j["type"] = "Generated";
                j["chunk"] = e.chunk;
                j["stop_reason"] = std::string(to_string(e.stop_reason));
                if (e.exchange) {
                    j["exchange"] = {{"request", e.exchange->request},
                                     {"status", e.exchange->status},
                                     {"response", e.exchange->response}};
                }
            } else if constexpr (std::is_same_v<T, events::Spawned>) {
                j["type"] = "Spawned";
                j["child_id"] = e.child_id;
                j["child_context"] = e.child_context;
            } else if constexpr (std::is_same_v<T, events::Joined>) {
                j["type"] = "Joined";
                j["child_id"] = e.child_id;
                j["payload"] = e.payload;
            } else if constexpr (std::is_same_v<T, events::Acted>) {
                j["type"] = "Acted";
                j["action"] = e.action;
                j["observation"] = e.observation;
            } else if constexpr (std::is_same_v<T, events::Ended>) {
                j["type"] = "Ended";
            } else if constexpr (std::is_same_v<T, events::Aborted>) {
                j["type"] = "Aborted";
                j["reason"] = e.reason;
                j["detail"] = e.detail;
            } else {
                j["type"] = "Warning";
                j["text"] = e.text;
            }
            return j;
        },
        ev);
}

const json& field(const json& obj, const char* name, const char* where) {
    if (!obj.is_object() || !obj.contains(name)) violation(std::string(where) + ": missing \"" + name + "\"");
    return obj[name];
}

std::string get_string(const json& obj, const char* name, const char* where) {
    const auto& v = field(obj, name, where);
    if (!v.is_string()) violation(std::string(where) + ": \"" + name + "\" must be a string");
    return v.get<std::string>();
}

std::int64_t get_int(const json& obj, const char* name, const char* where) {
    const auto& v = field(obj, name, where);
    if (!v.is_number_integer()) violation(std::string(where) + ": \"" + name + "\" must be an integer");
    return v.get<std::int64_t>();
}

NodeId get_node_id(const json& obj, const char* name, const char* where) {
    const auto v = get_int(obj, name, where);
    if (v < 0 || v > static_cast<std::int64_t>(UINT32_MAX)) violation(std::string(where) + ": node id out of range");
    return static_cast<NodeId>(v);
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const char* where) {
    for (const auto& [k, _] : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; })) {
            violation(std::string(where) + ": unexpected key \"" + k + "\"");
        }
    }
}

Event event_from_json(const json& j) {
    const char* where = "event";
    const auto type = get_string(j, "type", where);
    if (type == "Generated") {
        only_keys(j, {"type", "chunk", "stop_reason", "exchange"}, where);
        events::Generated g;
        g.chunk = get_string(j, "chunk", where);
        auto sr = parse_stop_reason(get_string(j, "stop_reason", where));
        if (!sr) violation("event: bad stop_reason");
        g.stop_reason = *sr;
        if (j.contains("exchange")) {
            const auto& x = j["exchange"];
            only_keys(x, {"request", "status", "response"}, "exchange");
            g.exchange = Exchange{get_string(x, "request", "exchange"), static_cast<int>(get_int(x, "status", "exchange")),
                                  get_string(x, "response", "exchange")};
        }
        return g;
    }
    if (type == "Spawned") {
        only_keys(j, {"type", "child_id", "child_context"}, where);
        return events::Spawned{get_node_id(j, "child_id", where), get_string(j, "child_context", where)};
    }
    if (type == "Joined") {
        only_keys(j, {"type", "child_id", "payload"}, where);
        return events::Joined{get_node_id(j, "child_id", where), get_string(j, "payload", where)};
    }
    if (type == "Acted") {
        only_keys(j, {"type", "action", "observation"}, where);
        return events::Acted{get_string(j, "action", where), get_string(j, "observation", where)};
    }
    if (type == "Ended") {
        only_keys(j, {"type"}, where);
        return events::Ended{};
    }
    if (type == "Aborted") {
        only_keys(j, {"type", "reason", "detail"}, where);
        return events::Aborted{get_string(j, "reason", where), get_string(j, "detail", where)};
    }
    if (type == "Warning") {
        only_keys(j, {"type", "text"}, where);
        return events::Warning{get_string(j, "text", where)};
    }
    violation("event: unknown type \"" + type + "\"");
}

// Walks a node's events in sequence order; `on_join` sees the insertion offset.
template <typename OnJoin>
std::string walk_sequence(const TraceNode& node, const ControlTokens& control, OnJoin&& on_join) {
    std::string seq;
    for (const auto& ev : node.events) {
        if (const auto* g = std::get_if<events::Generated>(&ev)) {
            const auto p = g->chunk.find(control.end_token);
            if (p != std::string::npos) {
                seq.append(g->chunk, 0, p + control.end_token.size());
            } else {
                seq += g->chunk;
                if (g->stop_reason == StopReason::Listen) seq += control.listen_token;
            }
        } else if (const auto* jn = std::get_if<events::Joined>(&ev)) {
            on_join(seq.size(), *jn);
            seq += jn->payload;
            seq += control.child_close_token;
        } else if (const auto* a = std::get_if<events::Acted>(&ev)) {
            seq += a->observation;
            seq += control.child_close_token;
        }
    }
    return seq;
}

}  // namespace

std::string NodeStatus::to_string() const {
    switch (state) {
        case State::Running: return "Running";
        case State::Completed: return "Completed";
        case State::Aborted: return "Aborted(" + reason + ")";
    }
    return "Running";
}

std::optional<NodeStatus> NodeStatus::parse(std::string_view text) {
    if (text == "Running") return NodeStatus{};
    if (text == "Completed") return completed();
    if (text.starts_with("Aborted(") && text.ends_with(")") && text.size() > 9) {
        return aborted(std::string(text.substr(8, text.size() - 9)));
    }
    return std::nullopt;
}

NodeId ThreadTree::add_root(std::string context) {
    if (!nodes_.empty()) throw std::logic_error("thread tree already has a root");
    TraceNode n;
    n.context = std::move(context);
    nodes_.push_back(std::move(n));
    return 0;
}

NodeId ThreadTree::add_child(NodeId parent, std::string context) {
    TraceNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.parent_id = parent;
    n.depth = nodes_.at(parent).depth + 1;
    n.context = std::move(context);
    nodes_.push_back(std::move(n));
    return nodes_.back().id;
}

std::vector<NodeId> ThreadTree::children_of(NodeId id) const {
    std::vector<NodeId> out;
    for (const auto& ev : nodes_.at(id).events) {
        if (const auto* s = std::get_if<events::Spawned>(&ev)) out.push_back(s->child_id);
    }
    return out;
}

DepthStats depth_stats(const ThreadTree& tree) {
    DepthStats s;
    if (tree.empty()) return s;
    std::int64_t sum = 0;
    for (const auto& n : tree.nodes()) {
        s.max_depth_edges = std::max(s.max_depth_edges, n.depth);
        sum += n.depth;
    }
    const auto count = static_cast<double>(tree.size());
    s.max_depth_nodes = s.max_depth_edges + 1;
    s.avg_depth_edges = static_cast<double>(sum) / count;
    s.avg_depth_nodes = s.avg_depth_edges + 1.0;
    return s;
}

std::int64_t subtree_generated_chars(const ThreadTree& tree, NodeId node) {
    std::int64_t total = 0;
    std::vector<NodeId> stack{node};
    while (!stack.empty()) {
        const auto id = stack.back();
        stack.pop_back();
        for (const auto& ev : tree.node(id).events) {
            if (const auto* g = std::get_if<events::Generated>(&ev)) total += static_cast<std::int64_t>(g->chunk.size());
            if (const auto* s = std::get_if<events::Spawned>(&ev)) stack.push_back(s->child_id);
        }
    }
    return total;
}

std::vector<Insertion> supplemental_work(const ThreadTree& tree, NodeId node) {
    std::vector<Insertion> out;
    walk_sequence(tree.node(node), tree.run.control, [&](std::size_t pos, const events::Joined& j) {
        out.push_back(Insertion{pos, subtree_generated_chars(tree, j.child_id), j.child_id});
    });
    return out;
}

std::string reconstruct_sequence(const TraceNode& node, const ControlTokens& control) {
    return walk_sequence(node, control, [](std::size_t, const events::Joined&) {});
}

std::string export_trace(const ThreadTree& tree) {
    ojson doc;
    doc["version"] = kTraceVersion;
    const auto& c = tree.run.control;
    const auto& l = tree.run.limits;
    doc["run"] = {{"control",
                   {{"listen_token", c.listen_token},
                    {"end_token", c.end_token},
                    {"child_close_token", c.child_close_token},
                    {"action_prefix", c.action_prefix}}},
                  {"limits",
                   {{"max_depth", l.max_depth},
                    {"max_generator_calls_total", l.max_generator_calls_total},
                    {"max_chunk_chars", l.max_chunk_chars},
                    {"max_children_per_thread", l.max_children_per_thread}}},
                  {"has_environment", tree.run.has_environment}};
    ojson nodes = ojson::array();
    for (const auto& n : tree.nodes()) {
        ojson j;
        j["id"] = n.id;
        j["parent_id"] = n.parent_id ? ojson(*n.parent_id) : ojson(nullptr);
        j["depth"] = n.depth;
        j["context"] = n.context;
        ojson evs = ojson::array();
        for (const auto& ev : n.events) evs.push_back(event_to_json(ev));
        j["events"] = std::move(evs);
        j["final_sequence"] = n.final_sequence;
        j["status"] = n.status.to_string();
        nodes.push_back(std::move(j));
    }
    doc["nodes"] = std::move(nodes);
    const auto stats = depth_stats(tree);
    doc["metrics"] = {{"total_generated_chars", tree.counters.total_generated_chars},
                      {"generator_calls", tree.counters.generator_calls},
                      {"environment_calls", tree.counters.environment_calls},
                      {"max_depth_edges", stats.max_depth_edges},
                      {"max_depth_nodes", stats.max_depth_nodes},
                      {"avg_depth_edges", stats.avg_depth_edges},
                      {"avg_depth_nodes", stats.avg_depth_nodes}};
    return doc.dump(2) + "\n";
}

void validate_tree(const ThreadTree& tree) {
    const auto& nodes = tree.nodes();
    if (nodes.empty()) violation("trace has no nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        if (n.id != i) violation("node ids must equal their index");
        if (i == 0) {
            if (n.parent_id) violation("root must not have a parent");
            if (n.depth != 0) violation("root depth must be 0");
        } else {
            if (!n.parent_id) violation("only node 0 may be a root");
            if (*n.parent_id >= n.id) violation("parent must precede child");
            if (n.depth != nodes[*n.parent_id].depth + 1) violation("child depth must be parent depth + 1");
        }
    }
    std::vector<int> spawned_by(nodes.size(), -1);
    for (const auto& n : nodes) {
        std::optional<NodeId> open;  // child spawned and not yet joined
        for (const auto& ev : n.events) {
            if (open) {
                // A failed join leaves the pair open and the parent ends in Aborted.
                if (std::holds_alternative<events::Aborted>(ev)) {
                    open.reset();
                    continue;
                }
                const auto* j = std::get_if<events::Joined>(&ev);
                if (!j || j->child_id != *open) violation("events between Spawned and Joined of a child");
                open.reset();
                continue;
            }
            if (const auto* s = std::get_if<events::Spawned>(&ev)) {
                if (s->child_id >= nodes.size() || nodes[s->child_id].parent_id != n.id) {
                    violation("Spawned refers to a node that is not a child");
                }
                if (spawned_by[s->child_id] != -1) violation("child spawned twice");
                spawned_by[s->child_id] = static_cast<int>(n.id);
                open = s->child_id;
            } else if (std::holds_alternative<events::Joined>(ev)) {
                violation("Joined without a matching Spawned");
            }
        }
    }
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (spawned_by[i] == -1) violation("node " + std::to_string(i) + " has no Spawned event in its parent");
    }
}

ThreadTree load_trace(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        violation(std::string("trace is not valid JSON: ") + e.what());
    }
    const char* where = "trace";
    if (!doc.is_object()) violation("trace must be a JSON object");
    only_keys(doc, {"version", "run", "nodes", "metrics"}, where);
    if (get_int(doc, "version", where) != kTraceVersion) violation("unsupported trace version");

    ThreadTree tree;
    const auto& run = field(doc, "run", where);
    only_keys(run, {"control", "limits", "has_environment"}, "run");
    const auto& c = field(run, "control", "run");
    only_keys(c, {"listen_token", "end_token", "child_close_token", "action_prefix"}, "control");
    tree.run.control = ControlTokens{get_string(c, "listen_token", "control"), get_string(c, "end_token", "control"),
                                     get_string(c, "child_close_token", "control"),
                                     get_string(c, "action_prefix", "control")};
    const auto& l = field(run, "limits", "run");
    only_keys(l, {"max_depth", "max_generator_calls_total", "max_chunk_chars", "max_children_per_thread"}, "limits");
    tree.run.limits = Limits{get_int(l, "max_depth", "limits"), get_int(l, "max_generator_calls_total", "limits"),
                             get_int(l, "max_chunk_chars", "limits"), get_int(l, "max_children_per_thread", "limits")};
    const auto& he = field(run, "has_environment", "run");
    if (!he.is_boolean()) violation("run: has_environment must be a boolean");
    tree.run.has_environment = he.get<bool>();
    try {
        tree.run.control.validate();
        tree.run.limits.validate();
    } catch (const std::invalid_argument& e) {
        violation(std::string("run: ") + e.what());
    }

    const auto& nodes = field(doc, "nodes", where);
    if (!nodes.is_array()) violation("trace: nodes must be an array");
    for (const auto& jn : nodes) {
        const char* nw = "node";
        only_keys(jn, {"id", "parent_id", "depth", "context", "events", "final_sequence", "status"}, nw);
        TraceNode n;
        n.id = get_node_id(jn, "id", nw);
        const auto& p = field(jn, "parent_id", nw);
        if (!p.is_null()) n.parent_id = get_node_id(jn, "parent_id", nw);
        n.depth = get_int(jn, "depth", nw);
        n.context = get_string(jn, "context", nw);
        const auto& evs = field(jn, "events", nw);
        if (!evs.is_array()) violation("node: events must be an array");
        for (const auto& e : evs) n.events.push_back(event_from_json(e));
        n.final_sequence = get_string(jn, "final_sequence", nw);
        auto st = NodeStatus::parse(get_string(jn, "status", nw));
        if (!st) violation("node: bad status");
        n.status = *st;
        tree.nodes_.push_back(std::move(n));
    }

    const auto& m = field(doc, "metrics", where);
    only_keys(m, {"total_generated_chars", "generator_calls", "environment_calls", "max_depth_edges", "max_depth_nodes",
                  "avg_depth_edges", "avg_depth_nodes"},
              "metrics");
    tree.counters.total_generated_chars = get_int(m, "total_generated_chars", "metrics");
    tree.counters.generator_calls = get_int(m, "generator_calls", "metrics");
    tree.counters.environment_calls = get_int(m, "environment_calls", "metrics");
    for (const char* k : {"avg_depth_edges", "avg_depth_nodes"}) {
        if (!field(m, k, "metrics").is_number()) violation(std::string("metrics: ") + k + " must be a number");
    }
    validate_tree(tree);
    const auto stats = depth_stats(tree);
    if (get_int(m, "max_depth_edges", "metrics") != stats.max_depth_edges ||
        get_int(m, "max_depth_nodes", "metrics") != stats.max_depth_nodes) {
        violation("metrics: depth fields disagree with the node list");
    }
    return tree;
}

std::string render_ascii(const ThreadTree& tree) {
    std::string out;
    if (tree.empty()) return out;
    std::function<void(NodeId)> visit = [&](NodeId id) {
        const auto& n = tree.node(id);
        std::string ctx;
        std::size_t chars = 0;
        for (std::size_t i = 0; i < n.context.size() && chars < kRenderContextChars; ++i) {
            const unsigned char c = static_cast<unsigned char>(n.context[i]);
            if ((c & 0xC0) != 0x80) ++chars;  // count code points, not continuation bytes
            if (chars > kRenderContextChars) break;
            ctx.push_back(c == '\n' || c == '\r' || c == '\t' ? ' ' : static_cast<char>(c));
        }
        // Keep trailing continuation bytes of the last code point.
        for (std::size_t i = ctx.size(); i < n.context.size(); ++i) {
            if ((static_cast<unsigned char>(n.context[i]) & 0xC0) != 0x80) break;
            ctx.push_back(n.context[i]);
        }
        out.append(static_cast<std::size_t>(n.depth) * 2, ' ');
        out += "[" + std::to_string(n.id) + "] " + n.status.to_string() + " \"" + ctx + "\"\n";
        for (auto child : tree.children_of(id)) visit(child);
    };
    visit(0);
    return out;
}

}  // namespace weave
