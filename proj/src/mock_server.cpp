#include "weave/mock_server.hpp"

#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

namespace weave {

using nlohmann::json;

namespace {

std::string finish_reason_for(StopReason reason) {
    switch (reason) {
        case StopReason::Listen: return "stop";
        case StopReason::Length: return "length";
        case StopReason::EndOfOutput: return "end";
    }
    return "end";
}

void reject(httplib::Response& res, const std::string& why) {
    res.status = 400;
    res.set_content(json{{"error", why}}.dump(), "application/json");
}

}  // namespace

MockCompletionServer::MockCompletionServer(std::shared_ptr<const Playbook> playbook, std::string path)
    : playbook_(std::move(playbook)), path_(std::move(path)), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

MockCompletionServer::~MockCompletionServer() { stop(); }

void MockCompletionServer::install_routes() {
    server_->Post(path_, [this](const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::parse_error&) {
            return reject(res, "body is not JSON");
        }
        if (!body.is_object()) return reject(res, "body must be an object");
        if (!body.contains("model") || !body["model"].is_string()) return reject(res, "model must be a string");
        if (!body.contains("prompt") || !body["prompt"].is_string()) return reject(res, "prompt must be a string");
        if (!body.contains("stop") || !body["stop"].is_array()) return reject(res, "stop must be an array");
        for (const auto& s : body["stop"]) {
            if (!s.is_string()) return reject(res, "stop entries must be strings");
        }
        if (!body.contains("temperature") || !body["temperature"].is_number() || body["temperature"].get<double>() != 0.0) {
            return reject(res, "temperature must be 0");
        }
        if (!body.contains("max_tokens") || !body["max_tokens"].is_number_integer()) {
            return reject(res, "max_tokens must be an integer");
        }

        const auto prompt = body["prompt"].get<std::string>();
        const auto idx = playbook_->match(prompt);
        if (!idx) {
            res.status = 404;
            res.set_content(json{{"error", "no playbook rule matches"}}.dump(), "application/json");
            return;
        }
        const auto& rule = playbook_->rules()[*idx];
        std::string text = rule.chunk;
        StopReason reason = rule.stop_reason;
        // A conforming server halts at the earliest stop sequence and excludes it.
        std::size_t cut = std::string::npos;
        for (const auto& s : body["stop"]) {
            const auto& stop = s.get_ref<const std::string&>();
            if (stop.empty()) continue;
            cut = std::min(cut, text.find(stop));
        }
        if (cut != std::string::npos) {
            text.resize(cut);
            reason = StopReason::Listen;
        }
        json out = {{"id", "cmpl-mock-" + std::to_string(served_.load())},
                    {"object", "text_completion"},
                    {"model", body["model"]},
                    {"choices", json::array({json{{"index", 0}, {"text", text}, {"finish_reason", finish_reason_for(reason)}}})}};
        ++served_;
        res.set_content(out.dump(), "application/json");
    });
}

int MockCompletionServer::start(const std::string& host, int port) {
    host_ = host;
    port_ = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (port_ <= 0) throw std::runtime_error("mock server could not bind " + host);
    worker_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void MockCompletionServer::listen_blocking(const std::string& host, int port) {
    host_ = host;
    port_ = port;
    if (!server_->listen(host, port)) throw std::runtime_error("mock server could not listen");
}

void MockCompletionServer::stop() {
    if (server_) server_->stop();
    if (worker_.joinable()) worker_.join();
}

void MockCompletionServer::wait() {
    if (worker_.joinable()) worker_.join();
}

std::string MockCompletionServer::url() const {
    return "http://" + host_ + ":" + std::to_string(port_) + path_;
}

}  // namespace weave
