// Local completion endpoint answering from a playbook file.
#include <iostream>

#include <CLI11.hpp>

#include "weave/mock_server.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Playbook-backed completion server"};
    std::string playbook_path;
    std::string host = "127.0.0.1";
    int port = 0;
    app.add_option("--playbook", playbook_path, "Playbook JSON")->required()->check(CLI::ExistingFile);
    app.add_option("--host", host, "Bind address");
    app.add_option("--port", port, "Port (0 picks a free one)");
    CLI11_PARSE(app, argc, argv);

    try {
        auto playbook = std::make_shared<const weave::Playbook>(weave::Playbook::load(playbook_path));
        weave::MockCompletionServer server(playbook);
        server.start(host, port);
        std::cout << server.url() << std::endl;
        server.wait();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
