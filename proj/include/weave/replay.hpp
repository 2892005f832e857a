#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weave/generator.hpp"
#include "weave/trace.hpp"

namespace weave {

/// Everything the runtime received from the outside during a run, in call order.
struct RecordedIo {
    std::vector<GeneratorReturn> returns;
    std::vector<std::string> observations;
    std::optional<std::string> generator_failure;
    std::optional<std::string> environment_failure;
};

RecordedIo recorded_io(const ThreadTree& tree);

struct ReplayReport {
    bool identical = false;
    std::optional<std::size_t> divergence_offset;
    std::string expected;  // export of the loaded trace
    std::string replayed;  // export of the re-executed run
};

/// Re-executes the run with the trace as playbook and environment script and
/// compares the exported bytes.
ReplayReport replay_trace(const ThreadTree& tree);

/// First offset where the two differ; absent when equal.
std::optional<std::size_t> first_divergence(std::string_view a, std::string_view b) noexcept;

}  // namespace weave
