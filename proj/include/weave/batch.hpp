#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "weave/craftworld.hpp"
#include "weave/runtime.hpp"

namespace weave {

/// One independent task run. Factories are called once per run and may be
/// called concurrently.
struct BatchTask {
    std::string seed;
    RunConfig config;
    std::function<std::unique_ptr<Generator>()> make_generator;
    std::function<std::unique_ptr<Environment>()> make_environment;  // may be empty
};

struct BatchOutcome {
    std::string trace_json;
    std::string status;
    std::optional<bool> env_success;
    std::optional<std::string> final_answer;

    bool operator==(const BatchOutcome&) const = default;
};

BatchOutcome run_one(const BatchTask& task);

/// Reference implementation.
std::vector<BatchOutcome> run_batch_serial(const std::vector<BatchTask>& tasks);
/// OpenMP over tasks; falls back to the serial loop when built without OpenMP.
std::vector<BatchOutcome> run_batch_parallel(const std::vector<BatchTask>& tasks);

struct OracleCheck {
    bool oracle = false;
    bool executor = false;

    bool agrees() const noexcept { return oracle == executor; }
    bool operator==(const OracleCheck&) const = default;
};

/// Fixed-point oracle vs breadth-first executor on each world's goal.
std::vector<OracleCheck> oracle_sweep_serial(const std::vector<CraftWorld>& worlds);
std::vector<OracleCheck> oracle_sweep_parallel(const std::vector<CraftWorld>& worlds);

struct RandomWorldParams {
    int max_items = 20;
    int max_recipes = 15;
    int max_ingredients = 3;
    int max_count = 3;
};

/// Seed-controlled recipe DAG. Items sit on levels 0..4; recipes draw their
/// ingredients from strictly lower levels, so the recipe graph is acyclic.
/// Only some level-0 items are gettable, which leaves a share of goals unreachable.
CraftWorld random_craft_world(std::uint64_t seed, const RandomWorldParams& params = {});

int parallel_workers() noexcept;

}  // namespace weave
