#pragma once

#include <memory>
#include <optional>
#include <string>

#include "weave/generator.hpp"

namespace weave {

struct HttpBackendConfig {
    /// Full endpoint, e.g. "http://127.0.0.1:8080/v1/completions".
    std::string url;
    std::string model;
    int max_tokens = 512;
    /// Name of the environment variable holding the bearer token.
    std::optional<std::string> auth_env;
    int timeout_seconds = 60;
};

/// Completion-style backend. Temperature is fixed at 0.
class HttpGenerator final : public Generator {
public:
    explicit HttpGenerator(HttpBackendConfig config);
    ~HttpGenerator() override;

    GeneratorReturn generate(const GeneratorCall& call) override;

    static constexpr double temperature() noexcept { return 0.0; }
    const HttpBackendConfig& config() const noexcept { return config_; }

    struct Endpoint;

private:
    HttpBackendConfig config_;
    std::unique_ptr<Endpoint> endpoint_;
};

/// Request body for one call, exactly as sent on the wire.
std::string build_completion_request(const HttpBackendConfig& config, const GeneratorCall& call);

/// Maps a response body to a return; throws GeneratorError(MalformedResponse).
GeneratorReturn parse_completion_response(const std::string& body, const GeneratorCall& call);

}  // namespace weave
