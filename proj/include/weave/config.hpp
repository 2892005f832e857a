#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "weave/environment.hpp"
#include "weave/generator.hpp"
#include "weave/http_generator.hpp"
#include "weave/runtime.hpp"

namespace weave {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Run configuration file. Referenced files are resolved against the config
/// file's directory and read eagerly, so a loaded config is self-contained.
///
///   {"prompts": {"all": p} | {"main": p, "sub": p},
///    "control": {...}, "limits": {...},
///    "generator": {"type": "scripted", "playbook": p}
///               | {"type": "http", "url", "model", "max_tokens", "auth_env", "temperature": 0},
///    "environment": {"type": "craftworld" | "scripted", "instance": p} | {"type": "none"}}
class ConfigFile {
public:
    enum class GeneratorType { Scripted, Http };
    enum class EnvironmentType { None, CraftWorld, Scripted };

    /// Throws ConfigError.
    static ConfigFile load(const std::filesystem::path& path);
    static ConfigFile from_json_text(std::string_view text, const std::filesystem::path& base_dir);

    const RunConfig& run() const noexcept { return run_; }
    GeneratorType generator_type() const noexcept { return generator_type_; }
    EnvironmentType environment_type() const noexcept { return environment_type_; }
    const HttpBackendConfig& http() const noexcept { return http_; }

    std::unique_ptr<Generator> make_generator() const;
    /// Fresh copy of the configured environment, or nullptr for "none".
    std::unique_ptr<Environment> make_environment() const;

private:
    RunConfig run_;
    GeneratorType generator_type_ = GeneratorType::Scripted;
    std::shared_ptr<const Playbook> playbook_;
    HttpBackendConfig http_;
    EnvironmentType environment_type_ = EnvironmentType::None;
    std::shared_ptr<const Environment> environment_;
};

/// Whole file as bytes; throws ConfigError when it cannot be read.
std::string read_file(const std::filesystem::path& path);

}  // namespace weave
