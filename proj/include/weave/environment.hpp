#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace weave {

/// Action executor E. Failures are in-band observations, never exceptions;
/// an exception escaping step() is treated by the runtime as an environment fault.
class Environment {
public:
    virtual ~Environment() = default;

    virtual std::string step(std::string_view action) = 0;
    virtual bool success() const = 0;
    /// Text the loader places in front of the task (e.g. crafting commands).
    virtual std::string task_header() const { return {}; }
    virtual std::unique_ptr<Environment> clone() const = 0;
};

}  // namespace weave
