#include "weave/runtime.hpp"

#include "weave/parsing.hpp"

namespace weave {

PromptSet PromptSet::uniform(std::string all) {
    PromptSet p;
    p.main_ = std::move(all);
    return p;
}

PromptSet PromptSet::split(std::string main, std::string sub) {
    PromptSet p;
    p.main_ = std::move(main);
    p.sub_ = std::move(sub);
    return p;
}

const std::string& PromptSet::for_depth(std::int64_t depth) const noexcept {
    return depth > 0 && sub_ ? *sub_ : main_;
}

void RunConfig::validate() const {
    control.validate();
    limits.validate();
}

std::string_view to_string(LimitKind kind) noexcept {
    switch (kind) {
        case LimitKind::Depth: return "depth";
        case LimitKind::GeneratorCalls: return "generator_calls";
        case LimitKind::ChunkChars: return "chunk_chars";
        case LimitKind::Children: return "children";
    }
    return "depth";
}

std::string AbortReason::to_string() const {
    switch (kind) {
        case AbortKind::LimitExceeded: return "LimitExceeded(" + std::string(weave::to_string(limit)) + ")";
        case AbortKind::GeneratorFailure: return "GeneratorFailure";
        case AbortKind::EnvironmentFailure: return "EnvironmentFailure";
        case AbortKind::MalformedGeneration: return "MalformedGeneration";
        case AbortKind::MalformedChildOutput: return "MalformedChildOutput";
    }
    return "MalformedGeneration";
}

RunError::RunError(AbortReason reason, NodeId node, std::string detail)
    : std::runtime_error(reason.to_string() + " at node " + std::to_string(node) + ": " + detail),
      reason_(reason),
      node_(node),
      detail_(std::move(detail)) {}

std::string join_child(ThreadState& parent, const ThreadOutcome& child, const ControlTokens& control) {
    auto payload = extract_print_payload(child.final_sequence, control);
    parent.sequence += payload;
    parent.sequence += control.child_close_token;
    for (const auto& [name, value] : child.exported_bindings) {
        if (parent.own_names.contains(name)) continue;
        const Value* have = parent.store.find(name);
        if (have && *have == value) continue;
        parent.store.bind(name, value);
    }
    return payload;
}

void ThreadRunner::fail(const ThreadState& t, AbortReason reason, std::string detail) const {
    throw RunError(reason, t.id, std::move(detail));
}

void ThreadRunner::warn_unresolved(const ThreadState& t, const std::vector<std::string>& names) {
    for (const auto& n : names) trace_.append(t.id, events::Warning{"unresolved placeholder {" + n + "}"});
}

GeneratorReturn ThreadRunner::call_generator(const ThreadState& t) {
    const auto& limits = config_.limits;
    if (trace_.counters.generator_calls >= limits.max_generator_calls_total) {
        fail(t, AbortReason::exceeded(LimitKind::GeneratorCalls),
             "generator call budget of " + std::to_string(limits.max_generator_calls_total) + " spent");
    }
    GeneratorCall call;
    call.full_prompt = config_.prompts.for_depth(t.depth) + "\n" + t.context + t.sequence;
    call.stop_sequences = {config_.control.listen_token};
    call.max_chunk_chars = static_cast<std::size_t>(limits.max_chunk_chars);
    ++trace_.counters.generator_calls;
    GeneratorReturn ret;
    try {
        ret = generator_.generate(call);
    } catch (const std::exception& e) {
        fail(t, {AbortKind::GeneratorFailure}, e.what());
    }
    trace_.counters.total_generated_chars += static_cast<std::int64_t>(ret.chunk.size());
    trace_.append(t.id, events::Generated{ret.chunk, ret.stop_reason, ret.exchange});
    if (static_cast<std::int64_t>(ret.chunk.size()) > limits.max_chunk_chars) {
        fail(t, AbortReason::exceeded(LimitKind::ChunkChars),
             "chunk of " + std::to_string(ret.chunk.size()) + " chars exceeds " + std::to_string(limits.max_chunk_chars));
    }
    return ret;
}

void ThreadRunner::spawn(ThreadState& t, const Spawn& s) {
    const auto& limits = config_.limits;
    if (trim(s.child_context).empty()) fail(t, {AbortKind::MalformedGeneration}, "listen token after an empty line");
    if (t.depth + 1 > limits.max_depth) {
        fail(t, AbortReason::exceeded(LimitKind::Depth),
             "child at depth " + std::to_string(t.depth + 1) + " exceeds " + std::to_string(limits.max_depth));
    }
    if (static_cast<std::int64_t>(t.children.size()) >= limits.max_children_per_thread) {
        fail(t, AbortReason::exceeded(LimitKind::Children),
             "thread already spawned " + std::to_string(t.children.size()) + " children");
    }
    warn_unresolved(t, s.unresolved);
    const NodeId child = trace_.add_child(t.id, s.child_context);
    t.children.push_back(child);
    trace_.append(t.id, events::Spawned{child, s.child_context});

    const ThreadOutcome outcome = run_thread(child, t.store);
    std::string payload;
    try {
        payload = join_child(t, outcome, config_.control);
    } catch (const ParseError& e) {
        fail(t, {AbortKind::MalformedChildOutput}, e.what());
    }
    if (payload.find(config_.control.end_token) != std::string::npos) {
        fail(t, {AbortKind::MalformedChildOutput}, "child payload contains the end token");
    }
    trace_.append(t.id, events::Joined{child, std::move(payload)});
}

void ThreadRunner::act(ThreadState& t, const Action& a) {
    if (environment_ == nullptr) fail(t, {AbortKind::EnvironmentFailure}, "action without an environment: " + a.action);
    if (a.action.empty()) fail(t, {AbortKind::MalformedGeneration}, "empty action");
    warn_unresolved(t, a.unresolved);
    std::string obs;
    ++trace_.counters.environment_calls;
    try {
        obs = environment_->step(a.action);
    } catch (const std::exception& e) {
        fail(t, {AbortKind::EnvironmentFailure}, e.what());
    }
    trace_.append(t.id, events::Acted{a.action, obs});
    if (obs.find(config_.control.end_token) != std::string::npos) {
        fail(t, {AbortKind::EnvironmentFailure}, "observation contains the end token");
    }
    t.sequence += obs;
    t.sequence += config_.control.child_close_token;
}

ThreadOutcome ThreadRunner::run_thread(NodeId node, VariableStore inherited) {
    const auto& control = config_.control;
    ThreadState t;
    t.id = node;
    t.depth = trace_.node(node).depth;
    t.context = trace_.node(node).context;
    t.store = std::move(inherited);
    try {
        for (;;) {
            const GeneratorReturn ret = call_generator(t);
            const auto end_at = ret.chunk.find(control.end_token);
            const std::string_view kept = end_at == std::string::npos
                                              ? std::string_view(ret.chunk)
                                              : std::string_view(ret.chunk).substr(0, end_at + control.end_token.size());
            for (auto& [name, value] : parse_assignments(kept, t.store)) {
                t.own_names.insert(name);
                t.store.bind(std::move(name), std::move(value));
            }
            const auto cont = classify_continuation(ret.chunk, ret.stop_reason, t.store, control, t.sequence);
            if (const auto* e = std::get_if<End>(&cont)) {
                t.sequence.append(ret.chunk, 0, e->keep);
                trace_.append(t.id, events::Ended{});
                break;
            }
            if (std::holds_alternative<Exhausted>(cont)) {
                t.sequence += ret.chunk;
                fail(t, {AbortKind::MalformedGeneration},
                     "generation stopped (" + std::string(to_string(ret.stop_reason)) + ") without a control token");
            }
            t.sequence += ret.chunk;
            t.sequence += control.listen_token;
            if (const auto* s = std::get_if<Spawn>(&cont)) {
                spawn(t, *s);
            } else {
                act(t, std::get<Action>(cont));
            }
        }
    } catch (RunError& e) {
        auto& n = trace_.node(node);
        n.final_sequence = t.sequence;
        n.status = NodeStatus::aborted(e.reason().to_string());
        if (e.node() == node) trace_.append(node, events::Aborted{e.reason().to_string(), e.detail()});
        throw;
    }
    auto& n = trace_.node(node);
    n.final_sequence = t.sequence;
    n.status = NodeStatus::completed();
    return ThreadOutcome{std::move(t.sequence), std::move(t.store), n.status};
}

TaskResult run_task(const std::string& seed, const RunConfig& config, Generator& generator, Environment* environment) {
    config.validate();
    if (seed.empty()) throw std::invalid_argument("seed context must be non-empty");
    TaskResult result;
    result.trace.run = RunHeader{config.control, config.limits, environment != nullptr};
    const NodeId root = result.trace.add_root(seed);
    ThreadRunner runner(config, generator, environment, result.trace);
    try {
        result.main = runner.run_thread(root);
        result.final_answer = extract_final_answer(result.main.final_sequence, config.control);
    } catch (const RunError& e) {
        result.abort = e.reason();
        result.failed_node = e.node();
        result.detail = e.detail();
        result.main.final_sequence = result.trace.root().final_sequence;
        result.main.status = result.trace.root().status;
    }
    if (environment) result.env_success = environment->success();
    return result;
}

}  // namespace weave
