#include "support/fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>

#include <unistd.h>

namespace weave::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return fs::path(WEAVE_DATA_DIR); }

fs::path scenario_dir(const std::string& name) { return data_dir() / "scenarios" / name; }

TaskResult run_scenario(const std::string& name) {
    const auto dir = scenario_dir(name);
    const auto cfg = ConfigFile::load(dir / "config.json");
    auto generator = cfg.make_generator();
    auto environment = cfg.make_environment();
    const std::string seed = (environment ? environment->task_header() : std::string()) + read_file(dir / "task.txt");
    return run_task(seed, cfg.run(), *generator, environment.get());
}

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("weave_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter.fetch_add(1)));
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace weave::testing
