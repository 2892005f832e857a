#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <string>
#include <thread>

#include "weave/generator.hpp"

namespace httplib {
class Server;
}

namespace weave {

/// Local completion endpoint answering from a playbook. Validates the request
/// body against the wire contract (400 on violation) and reports the rule's
/// stop reason as finish_reason "stop" / "length" / "end".
class MockCompletionServer {
public:
    explicit MockCompletionServer(std::shared_ptr<const Playbook> playbook, std::string path = "/v1/completions");
    ~MockCompletionServer();

    MockCompletionServer(const MockCompletionServer&) = delete;
    MockCompletionServer& operator=(const MockCompletionServer&) = delete;

    /// Binds (port 0 picks a free port), starts serving in the background and
    /// returns the bound port.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    /// Serves on the calling thread until stop() is called.
    void listen_blocking(const std::string& host, int port);
    void stop();
    /// Blocks until a started server stops.
    void wait();

    std::string url() const;
    std::size_t requests_served() const noexcept { return served_.load(); }

private:
    void install_routes();

    std::shared_ptr<const Playbook> playbook_;
    std::string path_;
    std::string host_;
    int port_ = 0;
    std::unique_ptr<httplib::Server> server_;
    std::thread worker_;
    std::atomic<std::size_t> served_{0};
};

}  // namespace weave
