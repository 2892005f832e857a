#pragma once

#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "weave/environment.hpp"

namespace weave {

struct ScriptRule {
    /// Exact action text (after trimming), or a regex that must match the whole action.
    std::string action;
    bool is_pattern = false;
    std::string observation;
    bool reusable = false;
};

/// Replays recorded trajectories. A rule fires for the first unconsumed (or
/// reusable) entry whose matcher accepts the action; unmatched actions observe
/// the fallback text.
class ScriptedEnvironment final : public Environment {
public:
    explicit ScriptedEnvironment(std::vector<ScriptRule> rules, std::vector<std::string> success_when = {},
                                 std::string fallback = "Nothing happens.");

    /// {"rules": [{"action"|"pattern": str, "observation": str, "reusable": bool}],
    ///  "success_when": {"executed": [str...]}, "unmatched_observation": str}
    static ScriptedEnvironment from_json_text(std::string_view text);
    static ScriptedEnvironment load(const std::string& path);

    std::string step(std::string_view action) override;
    /// True once every action listed in success_when has been executed.
    bool success() const override;
    std::unique_ptr<Environment> clone() const override;

    const std::vector<std::string>& history() const noexcept { return history_; }

private:
    std::vector<ScriptRule> rules_;
    std::vector<std::regex> compiled_;
    std::vector<bool> consumed_;
    std::vector<std::string> success_when_;
    std::string fallback_;
    std::vector<std::string> history_;
};

/// Returns recorded observations in order regardless of the action.
class ReplayEnvironment final : public Environment {
public:
    /// With `failure` set, the step after the last observation throws std::runtime_error(*failure).
    explicit ReplayEnvironment(std::vector<std::string> observations, std::optional<std::string> failure = std::nullopt)
        : observations_(std::move(observations)), failure_(std::move(failure)) {}

    std::string step(std::string_view action) override;
    bool success() const override { return false; }
    std::unique_ptr<Environment> clone() const override { return std::make_unique<ReplayEnvironment>(*this); }

private:
    std::vector<std::string> observations_;
    std::optional<std::string> failure_;
    std::size_t next_ = 0;
};

}  // namespace weave
