#include "weave/replay.hpp"

#include <algorithm>

#include "weave/runtime.hpp"
#include "weave/scripted_env.hpp"

namespace weave {

namespace {

void collect(const ThreadTree& tree, NodeId id, RecordedIo& io) {
    for (const auto& ev : tree.node(id).events) {
        if (const auto* g = std::get_if<events::Generated>(&ev)) {
            io.returns.push_back(GeneratorReturn{g->chunk, g->stop_reason, g->exchange});
        } else if (const auto* s = std::get_if<events::Spawned>(&ev)) {
            collect(tree, s->child_id, io);
        } else if (const auto* a = std::get_if<events::Acted>(&ev)) {
            io.observations.push_back(a->observation);
        } else if (const auto* ab = std::get_if<events::Aborted>(&ev)) {
            if (ab->reason == "GeneratorFailure") io.generator_failure = ab->detail;
            if (ab->reason == "EnvironmentFailure") io.environment_failure = ab->detail;
        }
    }
}

}  // namespace

RecordedIo recorded_io(const ThreadTree& tree) {
    RecordedIo io;
    if (!tree.empty()) collect(tree, 0, io);
    return io;
}

std::optional<std::size_t> first_divergence(std::string_view a, std::string_view b) noexcept {
    const auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
    if (ia == a.end() && ib == b.end()) return std::nullopt;
    return static_cast<std::size_t>(ia - a.begin());
}

ReplayReport replay_trace(const ThreadTree& tree) {
    validate_tree(tree);
    auto io = recorded_io(tree);
    ReplayGenerator generator(std::move(io.returns), std::move(io.generator_failure));
    ReplayEnvironment environment(std::move(io.observations), std::move(io.environment_failure));

    RunConfig config;
    config.control = tree.run.control;
    config.limits = tree.run.limits;
    const auto result =
        run_task(tree.root().context, config, generator, tree.run.has_environment ? &environment : nullptr);

    ReplayReport report;
    report.expected = export_trace(tree);
    report.replayed = export_trace(result.trace);
    report.divergence_offset = first_divergence(report.expected, report.replayed);
    report.identical = !report.divergence_offset.has_value();
    return report;
}

}  // namespace weave
