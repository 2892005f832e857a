#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "weave/control.hpp"
#include "weave/variables.hpp"

namespace weave {

enum class StopReason { Listen, EndOfOutput, Length };

std::string_view to_string(StopReason reason) noexcept;
std::optional<StopReason> parse_stop_reason(std::string_view text) noexcept;

enum class ParseErrc { EmptyParentLine, MalformedChildOutput };

class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ParseErrc code() const noexcept { return code_; }

private:
    ParseErrc code_;
};

// Continuation variants. Spawn and Action carry their text already
// interpolated, plus the placeholder names that could not be resolved.
struct Spawn {
    std::string child_context;
    std::vector<std::string> unresolved;
    bool operator==(const Spawn&) const = default;
};

struct Action {
    std::string action;
    std::vector<std::string> unresolved;
    bool operator==(const Action&) const = default;
};

struct End {
    /// Length of the chunk prefix that is kept: everything up to and including the end token.
    std::size_t keep = 0;
    bool operator==(const End&) const = default;
};

struct Exhausted {
    bool operator==(const Exhausted&) const = default;
};

using Continuation = std::variant<Spawn, Action, End, Exhausted>;

struct Interpolated {
    std::string text;
    std::vector<std::string> unresolved;
};

/// Replaces `{name}` for bound, non-opaque names. `{{` is an escaped brace pair
/// and never opens a placeholder. Unresolved names are reported in order of
/// appearance (duplicates kept once).
Interpolated interpolate(std::string_view text, const VariableStore& store);

/// Last line that is not whitespace-only, without its newline. Empty if none.
std::string_view last_nonempty_line(std::string_view text) noexcept;

/// Classifies one generator return. `prior` is the thread's sequence before
/// this chunk; it only matters when the halting line started in an earlier chunk.
Continuation classify_continuation(std::string_view chunk, StopReason stop_reason,
                                   const VariableStore& store, const ControlTokens& control,
                                   std::string_view prior = {});

/// Child context from the parent's sequence: last non-empty line, trailing
/// listen token removed, trimmed, placeholders instantiated.
/// Throws ParseError(EmptyParentLine).
Interpolated phi(std::string_view parent_sequence, const VariableStore& store,
                 const ControlTokens& control = {});

/// `name = rhs` lines in order. Each rhs is evaluated against `store` plus the
/// bindings from earlier lines of the same chunk; unevaluable rhs bind Opaque.
std::vector<std::pair<std::string, Value>> parse_assignments(std::string_view chunk,
                                                             const VariableStore& store = {});

/// Payload of the last `print('...')` / `print("...")` line before the end
/// token, verbatim. Throws ParseError(MalformedChildOutput).
std::string extract_print_payload(std::string_view child_sequence, const ControlTokens& control = {});

/// Text after the first action prefix, trimmed.
std::string extract_action(std::string_view line, const ControlTokens& control = {});

/// Text after the last "Final Answer:" marker up to end of line, trimmed.
std::optional<std::string> extract_final_answer(std::string_view sequence,
                                                const ControlTokens& control = {});

std::string_view trim(std::string_view s) noexcept;

}  // namespace weave
