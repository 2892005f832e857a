#include "weave/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "weave/craftworld.hpp"
#include "weave/scripted_env.hpp"

namespace weave {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw ConfigError(what); }

void only_keys(const json& obj, std::initializer_list<std::string_view> keys, const std::string& where) {
    if (!obj.is_object()) bad(where + " must be an object");
    for (const auto& [k, _] : obj.items()) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) bad("unknown key \"" + k + "\" in " + where);
    }
}

std::string string_at(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) bad(where + " needs \"" + key + "\"");
    if (!obj[key].is_string()) bad(where + "." + key + " must be a string");
    return obj[key].get<std::string>();
}

std::int64_t int_at(const json& obj, const char* key, const std::string& where) {
    if (!obj[key].is_number_integer()) bad(where + "." + key + " must be an integer");
    return obj[key].get<std::int64_t>();
}

fs::path existing(const fs::path& base, const std::string& rel, const std::string& what) {
    fs::path p = fs::path(rel).is_absolute() ? fs::path(rel) : base / rel;
    if (!fs::is_regular_file(p)) bad(what + " not found: " + p.string());
    return p;
}

}  // namespace

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ConfigFile ConfigFile::load(const fs::path& path) {
    if (!fs::is_regular_file(path)) bad("config not found: " + path.string());
    return from_json_text(read_file(path), path.parent_path());
}

ConfigFile ConfigFile::from_json_text(std::string_view text, const fs::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("config is not valid JSON: ") + e.what());
    }
    only_keys(doc, {"prompts", "control", "limits", "generator", "environment"}, "config");
    ConfigFile cfg;

    if (!doc.contains("prompts")) bad("config needs \"prompts\"");
    const auto& prompts = doc["prompts"];
    only_keys(prompts, {"all", "main", "sub"}, "prompts");
    if (prompts.contains("all")) {
        if (prompts.size() != 1) bad("prompts: use either \"all\" or \"main\" + \"sub\"");
        cfg.run_.prompts = PromptSet::uniform(read_file(existing(base_dir, string_at(prompts, "all", "prompts"), "prompt")));
    } else {
        if (!prompts.contains("main") || !prompts.contains("sub")) bad("prompts needs \"all\" or both \"main\" and \"sub\"");
        cfg.run_.prompts =
            PromptSet::split(read_file(existing(base_dir, string_at(prompts, "main", "prompts"), "prompt")),
                             read_file(existing(base_dir, string_at(prompts, "sub", "prompts"), "prompt")));
    }

    if (doc.contains("control")) {
        const auto& c = doc["control"];
        only_keys(c, {"listen_token", "end_token", "child_close_token", "action_prefix"}, "control");
        auto& ct = cfg.run_.control;
        if (c.contains("listen_token")) ct.listen_token = string_at(c, "listen_token", "control");
        if (c.contains("end_token")) ct.end_token = string_at(c, "end_token", "control");
        if (c.contains("child_close_token")) ct.child_close_token = string_at(c, "child_close_token", "control");
        if (c.contains("action_prefix")) ct.action_prefix = string_at(c, "action_prefix", "control");
    }
    if (doc.contains("limits")) {
        const auto& l = doc["limits"];
        only_keys(l, {"max_depth", "max_generator_calls_total", "max_chunk_chars", "max_children_per_thread"}, "limits");
        auto& lim = cfg.run_.limits;
        if (l.contains("max_depth")) lim.max_depth = int_at(l, "max_depth", "limits");
        if (l.contains("max_generator_calls_total"))
            lim.max_generator_calls_total = int_at(l, "max_generator_calls_total", "limits");
        if (l.contains("max_chunk_chars")) lim.max_chunk_chars = int_at(l, "max_chunk_chars", "limits");
        if (l.contains("max_children_per_thread"))
            lim.max_children_per_thread = int_at(l, "max_children_per_thread", "limits");
    }
    try {
        cfg.run_.validate();
    } catch (const std::invalid_argument& e) {
        bad(e.what());
    }

    if (!doc.contains("generator")) bad("config needs \"generator\"");
    const auto& g = doc["generator"];
    if (!g.is_object()) bad("generator must be an object");
    const auto gtype = string_at(g, "type", "generator");
    if (gtype == "scripted") {
        only_keys(g, {"type", "playbook"}, "generator");
        cfg.generator_type_ = GeneratorType::Scripted;
        const auto path = existing(base_dir, string_at(g, "playbook", "generator"), "playbook");
        try {
            cfg.playbook_ = std::make_shared<const Playbook>(Playbook::from_json_text(read_file(path)));
        } catch (const std::exception& e) {
            bad("playbook " + path.string() + ": " + e.what());
        }
    } else if (gtype == "http") {
        only_keys(g, {"type", "url", "model", "max_tokens", "auth_env", "temperature", "timeout_seconds"}, "generator");
        cfg.generator_type_ = GeneratorType::Http;
        cfg.http_.url = string_at(g, "url", "generator");
        cfg.http_.model = string_at(g, "model", "generator");
        if (g.contains("max_tokens")) {
            const auto m = int_at(g, "max_tokens", "generator");
            if (m < 1) bad("generator.max_tokens must be positive");
            cfg.http_.max_tokens = static_cast<int>(m);
        }
        if (g.contains("timeout_seconds")) {
            const auto t = int_at(g, "timeout_seconds", "generator");
            if (t < 1) bad("generator.timeout_seconds must be positive");
            cfg.http_.timeout_seconds = static_cast<int>(t);
        }
        if (g.contains("auth_env")) cfg.http_.auth_env = string_at(g, "auth_env", "generator");
        if (g.contains("temperature") && (!g["temperature"].is_number() || g["temperature"].get<double>() != 0.0)) {
            bad("generator.temperature is fixed at 0");
        }
    } else {
        bad("generator.type must be \"scripted\" or \"http\"");
    }

    if (doc.contains("environment")) {
        const auto& e = doc["environment"];
        if (!e.is_object()) bad("environment must be an object");
        const auto etype = string_at(e, "type", "environment");
        if (etype == "none") {
            only_keys(e, {"type"}, "environment");
        } else if (etype == "craftworld" || etype == "scripted") {
            only_keys(e, {"type", "instance"}, "environment");
            const auto path = existing(base_dir, string_at(e, "instance", "environment"), "environment instance");
            try {
                if (etype == "craftworld") {
                    cfg.environment_type_ = EnvironmentType::CraftWorld;
                    cfg.environment_ = std::make_shared<const CraftWorld>(CraftWorld::from_json_text(read_file(path)));
                } else {
                    cfg.environment_type_ = EnvironmentType::Scripted;
                    cfg.environment_ =
                        std::make_shared<const ScriptedEnvironment>(ScriptedEnvironment::from_json_text(read_file(path)));
                }
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& ex) {
                bad("environment " + path.string() + ": " + ex.what());
            }
        } else {
            bad("environment.type must be \"craftworld\", \"scripted\" or \"none\"");
        }
    }
    return cfg;
}

std::unique_ptr<Generator> ConfigFile::make_generator() const {
    if (generator_type_ == GeneratorType::Http) return std::make_unique<HttpGenerator>(http_);
    return std::make_unique<ScriptedGenerator>(playbook_);
}

std::unique_ptr<Environment> ConfigFile::make_environment() const {
    return environment_ ? environment_->clone() : nullptr;
}

}  // namespace weave
