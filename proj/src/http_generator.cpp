#include "weave/http_generator.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace weave {

using nlohmann::json;

struct HttpGenerator::Endpoint {
    std::string origin;  // scheme://host:port
    std::string path;
};

namespace {

HttpGenerator::Endpoint split_url(const std::string& url);

}  // namespace

HttpGenerator::HttpGenerator(HttpBackendConfig config)
    : config_(std::move(config)), endpoint_(std::make_unique<Endpoint>(split_url(config_.url))) {
    if (config_.model.empty()) throw std::invalid_argument("http backend needs a model name");
    if (config_.max_tokens <= 0) throw std::invalid_argument("max_tokens must be positive");
}

HttpGenerator::~HttpGenerator() = default;

namespace {

HttpGenerator::Endpoint split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http") {
        throw std::invalid_argument("http backend url must start with http://: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    HttpGenerator::Endpoint ep;
    ep.origin = url.substr(0, path_start);
    ep.path = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (ep.origin.size() <= scheme_end + 3) throw std::invalid_argument("http backend url has no host: " + url);
    return ep;
}

}  // namespace

std::string build_completion_request(const HttpBackendConfig& config, const GeneratorCall& call) {
    nlohmann::ordered_json body;
    body["model"] = config.model;
    body["prompt"] = call.full_prompt;
    body["stop"] = call.stop_sequences;
    body["temperature"] = 0;
    body["max_tokens"] = config.max_tokens;
    return body.dump();
}

GeneratorReturn parse_completion_response(const std::string& body, const GeneratorCall& call) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::parse_error& e) {
        throw GeneratorError(GeneratorErrc::MalformedResponse, e.what());
    }
    if (!doc.is_object() || !doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
        throw GeneratorError(GeneratorErrc::MalformedResponse, "missing choices[0]");
    }
    const auto& choice = doc["choices"][0];
    if (!choice.is_object() || !choice.contains("text") || !choice["text"].is_string()) {
        throw GeneratorError(GeneratorErrc::MalformedResponse, "missing choices[0].text");
    }
    if (!choice.contains("finish_reason")) {
        throw GeneratorError(GeneratorErrc::MalformedResponse, "missing choices[0].finish_reason");
    }
    GeneratorReturn out;
    out.chunk = choice["text"].get<std::string>();
    const auto& fr = choice["finish_reason"];
    const std::string finish = fr.is_string() ? fr.get<std::string>() : std::string();
    if (finish == "stop") {
        out.stop_reason = StopReason::Listen;
    } else if (finish == "length") {
        out.stop_reason = StopReason::Length;
    } else {
        out.stop_reason = StopReason::EndOfOutput;
    }
    if (out.stop_reason == StopReason::Listen) {
        // Some servers echo the matched stop sequence; the chunk must exclude it.
        for (const auto& s : call.stop_sequences) {
            if (!s.empty() && out.chunk.ends_with(s)) {
                out.chunk.resize(out.chunk.size() - s.size());
                break;
            }
        }
    }
    if (out.chunk.size() > call.max_chunk_chars) {
        out.chunk.resize(call.max_chunk_chars);
        out.stop_reason = StopReason::Length;
    }
    return out;
}

GeneratorReturn HttpGenerator::generate(const GeneratorCall& call) {
    const auto request = build_completion_request(config_, call);

    httplib::Client client(endpoint_->origin);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (config_.auth_env) {
        if (const char* token = std::getenv(config_.auth_env->c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + token);
        }
    }

    auto res = client.Post(endpoint_->path, headers, request, "application/json");
    if (!res) {
        throw GeneratorError(GeneratorErrc::TransportError, httplib::to_string(res.error()));
    }
    Exchange exchange{request, res->status, res->body};
    if (res->status < 200 || res->status >= 300) {
        throw GeneratorError(GeneratorErrc::BadStatus, "HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    auto out = parse_completion_response(res->body, call);
    out.exchange = std::move(exchange);
    return out;
}

}  // namespace weave
