#include "weave/scripted_env.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "weave/parsing.hpp"

namespace weave {

ScriptedEnvironment::ScriptedEnvironment(std::vector<ScriptRule> rules, std::vector<std::string> success_when,
                                         std::string fallback)
    : rules_(std::move(rules)),
      consumed_(rules_.size(), false),
      success_when_(std::move(success_when)),
      fallback_(std::move(fallback)) {
    compiled_.reserve(rules_.size());
    for (const auto& r : rules_) {
        compiled_.emplace_back(r.is_pattern ? std::regex(r.action) : std::regex());
    }
}

ScriptedEnvironment ScriptedEnvironment::from_json_text(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scripted environment is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array()) {
        throw std::invalid_argument("scripted environment needs a \"rules\" array");
    }
    for (const auto& [key, _] : doc.items()) {
        if (key != "rules" && key != "success_when" && key != "unmatched_observation") {
            throw std::invalid_argument("unknown scripted environment key: " + key);
        }
    }
    std::vector<ScriptRule> rules;
    for (const auto& r : doc["rules"]) {
        if (!r.is_object()) throw std::invalid_argument("script rule must be an object");
        for (const auto& [key, _] : r.items()) {
            if (key != "action" && key != "pattern" && key != "observation" && key != "reusable") {
                throw std::invalid_argument("unknown script rule key: " + key);
            }
        }
        ScriptRule rule;
        const bool has_action = r.contains("action"), has_pattern = r.contains("pattern");
        if (has_action == has_pattern) throw std::invalid_argument("script rule needs exactly one of action/pattern");
        const auto& m = has_action ? r["action"] : r["pattern"];
        if (!m.is_string() || !r.contains("observation") || !r["observation"].is_string()) {
            throw std::invalid_argument("script rule needs string matcher and observation");
        }
        rule.action = m.get<std::string>();
        rule.is_pattern = has_pattern;
        rule.observation = r["observation"].get<std::string>();
        rule.reusable = r.value("reusable", false);
        rules.push_back(std::move(rule));
    }
    std::vector<std::string> success_when;
    if (doc.contains("success_when")) {
        const auto& s = doc["success_when"];
        if (!s.is_object() || !s.contains("executed") || !s["executed"].is_array() || s.size() != 1) {
            throw std::invalid_argument("success_when must be {\"executed\": [...]}");
        }
        success_when = s["executed"].get<std::vector<std::string>>();
    }
    std::string fallback = doc.value("unmatched_observation", std::string("Nothing happens."));
    try {
        return ScriptedEnvironment(std::move(rules), std::move(success_when), std::move(fallback));
    } catch (const std::regex_error& e) {
        throw std::invalid_argument(std::string("bad script pattern: ") + e.what());
    }
}

ScriptedEnvironment ScriptedEnvironment::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open scripted environment: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string ScriptedEnvironment::step(std::string_view action) {
    const std::string a(trim(action));
    history_.push_back(a);
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (consumed_[i]) continue;
        const auto& r = rules_[i];
        const bool hit = r.is_pattern ? std::regex_match(a, compiled_[i]) : r.action == a;
        if (!hit) continue;
        if (!r.reusable) consumed_[i] = true;
        return r.observation;
    }
    return fallback_;
}

bool ScriptedEnvironment::success() const {
    if (success_when_.empty()) return false;
    return std::all_of(success_when_.begin(), success_when_.end(), [&](const std::string& s) {
        return std::find(history_.begin(), history_.end(), s) != history_.end();
    });
}

std::unique_ptr<Environment> ScriptedEnvironment::clone() const {
    return std::make_unique<ScriptedEnvironment>(*this);
}

std::string ReplayEnvironment::step(std::string_view) {
    if (next_ >= observations_.size()) throw std::runtime_error(failure_.value_or("no recorded observations left"));
    return observations_[next_++];
}

}  // namespace weave
