#include "weave/generator.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace weave {

using nlohmann::json;

std::string_view to_string(GeneratorErrc code) noexcept {
    switch (code) {
        case GeneratorErrc::PlaybookMiss: return "PlaybookMiss";
        case GeneratorErrc::TransportError: return "TransportError";
        case GeneratorErrc::BadStatus: return "BadStatus";
        case GeneratorErrc::MalformedResponse: return "MalformedResponse";
        case GeneratorErrc::ReplayExhausted: return "ReplayExhausted";
    }
    return "GeneratorError";
}

GeneratorError::GeneratorError(GeneratorErrc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

bool PlaybookRule::matches(std::string_view full_prompt) const {
    if (const auto* s = std::get_if<SuffixLiteral>(&matcher)) return full_prompt.ends_with(s->suffix);
    const auto& p = std::get<PromptPattern>(matcher);
    return std::regex_search(full_prompt.begin(), full_prompt.end(), p.compiled);
}

Playbook& Playbook::on_suffix(std::string suffix, std::string chunk, StopReason reason) {
    rules_.push_back(PlaybookRule{SuffixLiteral{std::move(suffix)}, std::move(chunk), reason});
    return *this;
}

Playbook& Playbook::on_pattern(const std::string& regex, std::string chunk, StopReason reason) {
    rules_.push_back(PlaybookRule{PromptPattern{regex, std::regex(regex)}, std::move(chunk), reason});
    return *this;
}

std::optional<std::size_t> Playbook::match(std::string_view full_prompt) const {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (rules_[i].matches(full_prompt)) return i;
    }
    return std::nullopt;
}

Playbook Playbook::from_json_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("playbook is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array()) {
        throw std::invalid_argument("playbook must be an object with a \"rules\" array");
    }
    for (const auto& [key, _] : doc.items()) {
        if (key != "rules") throw std::invalid_argument("unknown playbook key: " + key);
    }
    Playbook book;
    for (const auto& r : doc["rules"]) {
        if (!r.is_object() || !r.contains("chunk") || !r["chunk"].is_string()) {
            throw std::invalid_argument("playbook rule needs a string \"chunk\"");
        }
        for (const auto& [key, _] : r.items()) {
            if (key != "suffix" && key != "pattern" && key != "chunk" && key != "stop_reason") {
                throw std::invalid_argument("unknown playbook rule key: " + key);
            }
        }
        StopReason reason = StopReason::Listen;
        if (r.contains("stop_reason")) {
            auto parsed = r["stop_reason"].is_string() ? parse_stop_reason(r["stop_reason"].get<std::string>())
                                                       : std::nullopt;
            if (!parsed) throw std::invalid_argument("bad stop_reason in playbook rule");
            reason = *parsed;
        }
        auto chunk = r["chunk"].get<std::string>();
        const bool has_suffix = r.contains("suffix");
        const bool has_pattern = r.contains("pattern");
        if (has_suffix == has_pattern) {
            throw std::invalid_argument("playbook rule needs exactly one of \"suffix\" or \"pattern\"");
        }
        if (!r[has_suffix ? "suffix" : "pattern"].is_string()) {
            throw std::invalid_argument("playbook rule matcher must be a string");
        }
        if (has_suffix) {
            book.on_suffix(r["suffix"].get<std::string>(), std::move(chunk), reason);
        } else {
            try {
                book.on_pattern(r["pattern"].get<std::string>(), std::move(chunk), reason);
            } catch (const std::regex_error& e) {
                throw std::invalid_argument(std::string("bad playbook pattern: ") + e.what());
            }
        }
    }
    return book;
}

Playbook Playbook::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open playbook: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string Playbook::to_json_text() const {
    nlohmann::ordered_json rules = nlohmann::ordered_json::array();
    for (const auto& r : rules_) {
        nlohmann::ordered_json j;
        if (const auto* s = std::get_if<SuffixLiteral>(&r.matcher)) {
            j["suffix"] = s->suffix;
        } else {
            j["pattern"] = std::get<PromptPattern>(r.matcher).source;
        }
        j["chunk"] = r.chunk;
        j["stop_reason"] = std::string(to_string(r.stop_reason));
        rules.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["rules"] = std::move(rules);
    return doc.dump(2) + "\n";
}

GeneratorReturn ScriptedGenerator::generate(const GeneratorCall& call) {
    const auto idx = playbook_ ? playbook_->match(call.full_prompt) : std::nullopt;
    if (!idx) {
        constexpr std::size_t kTail = 80;
        const auto& p = call.full_prompt;
        const auto tail = p.size() > kTail ? p.substr(p.size() - kTail) : p;
        throw GeneratorError(GeneratorErrc::PlaybookMiss, "no rule matches prompt ending in \"" + tail + "\"");
    }
    const auto& rule = playbook_->rules()[*idx];
    return GeneratorReturn{rule.chunk, rule.stop_reason, std::nullopt};
}

GeneratorReturn ReplayGenerator::generate(const GeneratorCall&) {
    if (queue_.empty() && failure_) throw std::runtime_error(*failure_);
    if (queue_.empty()) throw GeneratorError(GeneratorErrc::ReplayExhausted, "no recorded generator returns left");
    auto r = std::move(queue_.front());
    queue_.pop_front();
    return r;
}

}  // namespace weave
