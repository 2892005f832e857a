#pragma once

#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "weave/parsing.hpp"

namespace weave {

struct GeneratorCall {
    std::string full_prompt;
    std::vector<std::string> stop_sequences;
    std::size_t max_chunk_chars = 4096;
};

/// Verbatim wire record of one backend round trip.
struct Exchange {
    std::string request;
    int status = 0;
    std::string response;

    bool operator==(const Exchange&) const = default;
};

struct GeneratorReturn {
    std::string chunk;
    StopReason stop_reason = StopReason::EndOfOutput;
    std::optional<Exchange> exchange;

    bool operator==(const GeneratorReturn&) const = default;
};

enum class GeneratorErrc { PlaybookMiss, TransportError, BadStatus, MalformedResponse, ReplayExhausted };

std::string_view to_string(GeneratorErrc code) noexcept;

class GeneratorError : public std::runtime_error {
public:
    GeneratorError(GeneratorErrc code, const std::string& what);
    GeneratorErrc code() const noexcept { return code_; }

private:
    GeneratorErrc code_;
};

/// The token producer G.
class Generator {
public:
    virtual ~Generator() = default;
    virtual GeneratorReturn generate(const GeneratorCall& call) = 0;
};

struct SuffixLiteral {
    std::string suffix;
};

struct PromptPattern {
    std::string source;
    std::regex compiled;
};

struct PlaybookRule {
    std::variant<SuffixLiteral, PromptPattern> matcher;
    std::string chunk;
    StopReason stop_reason = StopReason::Listen;

    bool matches(std::string_view full_prompt) const;
};

/// Ordered rule table; first match wins.
class Playbook {
public:
    Playbook() = default;
    explicit Playbook(std::vector<PlaybookRule> rules) : rules_(std::move(rules)) {}

    Playbook& on_suffix(std::string suffix, std::string chunk, StopReason reason = StopReason::Listen);
    Playbook& on_pattern(const std::string& regex, std::string chunk, StopReason reason = StopReason::Listen);

    /// Index of the first matching rule, if any.
    std::optional<std::size_t> match(std::string_view full_prompt) const;

    const std::vector<PlaybookRule>& rules() const noexcept { return rules_; }

    /// JSON: {"rules": [{"suffix"|"pattern": str, "chunk": str, "stop_reason": "Listen"|...}]}
    static Playbook from_json_text(std::string_view text);
    static Playbook load(const std::string& path);
    std::string to_json_text() const;

private:
    std::vector<PlaybookRule> rules_;
};

/// Deterministic backend: a pure function of (playbook, full_prompt).
class ScriptedGenerator final : public Generator {
public:
    explicit ScriptedGenerator(std::shared_ptr<const Playbook> playbook) : playbook_(std::move(playbook)) {}

    GeneratorReturn generate(const GeneratorCall& call) override;

private:
    std::shared_ptr<const Playbook> playbook_;
};

/// Hands out recorded returns in call order, ignoring the prompt.
class ReplayGenerator final : public Generator {
public:
    /// With `failure` set, the call after the last recorded return throws
    /// std::runtime_error(*failure), reproducing a recorded backend fault.
    explicit ReplayGenerator(std::vector<GeneratorReturn> recorded, std::optional<std::string> failure = std::nullopt)
        : queue_(recorded.begin(), recorded.end()), failure_(std::move(failure)) {}

    GeneratorReturn generate(const GeneratorCall& call) override;
    std::size_t remaining() const noexcept { return queue_.size(); }

private:
    std::deque<GeneratorReturn> queue_;
    std::optional<std::string> failure_;
};

}  // namespace weave
