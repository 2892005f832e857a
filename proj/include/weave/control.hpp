#pragma once

#include <cstdint>
#include <string>

namespace weave {

struct ControlTokens {
    std::string listen_token = "=>";
    std::string end_token = "#END#";
    std::string child_close_token = "<=";
    std::string action_prefix = ">";

    /// Throws std::invalid_argument on empty, duplicate, or overlapping tokens.
    void validate() const;

    bool operator==(const ControlTokens&) const = default;
};

struct Limits {
    std::int64_t max_depth = 10;
    std::int64_t max_generator_calls_total = 2000;
    std::int64_t max_chunk_chars = 4096;
    std::int64_t max_children_per_thread = 100;

    /// All limits must be strictly positive.
    void validate() const;

    bool operator==(const Limits&) const = default;
};

}  // namespace weave
