#pragma once

#include <filesystem>
#include <string>

#include "weave/config.hpp"
#include "weave/runtime.hpp"

namespace weave::testing {

std::filesystem::path data_dir();
std::filesystem::path scenario_dir(const std::string& name);

/// Runs a bundled scenario exactly as `weave run` does.
TaskResult run_scenario(const std::string& name);

/// Fresh directory under the system temp dir, removed by the destructor.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace weave::testing
