#include "weave/batch.hpp"

#include <algorithm>
#include <random>

#ifdef WEAVE_HAVE_OPENMP
#include <omp.h>
#endif

#include "weave/craft_planner.hpp"

namespace weave {

BatchOutcome run_one(const BatchTask& task) {
    auto generator = task.make_generator();
    std::unique_ptr<Environment> environment = task.make_environment ? task.make_environment() : nullptr;
    const auto result = run_task(task.seed, task.config, *generator, environment.get());
    return BatchOutcome{export_trace(result.trace), result.trace.root().status.to_string(), result.env_success,
                        result.final_answer};
}

std::vector<BatchOutcome> run_batch_serial(const std::vector<BatchTask>& tasks) {
    std::vector<BatchOutcome> out;
    out.reserve(tasks.size());
    for (const auto& t : tasks) out.push_back(run_one(t));
    return out;
}

std::vector<BatchOutcome> run_batch_parallel(const std::vector<BatchTask>& tasks) {
    std::vector<BatchOutcome> out(tasks.size());
    const auto n = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) out[i] = run_one(tasks[i]);
    return out;
}

namespace {

OracleCheck check(const CraftWorld& w) {
    return OracleCheck{craftable_oracle(w.recipes(), w.gettable(), w.goal()), bfs_plan_execute(w).reached};
}

}  // namespace

std::vector<OracleCheck> oracle_sweep_serial(const std::vector<CraftWorld>& worlds) {
    std::vector<OracleCheck> out;
    out.reserve(worlds.size());
    for (const auto& w : worlds) out.push_back(check(w));
    return out;
}

std::vector<OracleCheck> oracle_sweep_parallel(const std::vector<CraftWorld>& worlds) {
    std::vector<OracleCheck> out(worlds.size());
    const auto n = static_cast<std::int64_t>(worlds.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) out[i] = check(worlds[i]);
    return out;
}

CraftWorld random_craft_world(std::uint64_t seed, const RandomWorldParams& params) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    constexpr int kLevels = 5;
    static const char* const kWords[] = {"oak", "iron", "red", "Birch", "stone", "gold", "dark", "glass"};

    const int n_items = uniform(4, params.max_items);
    std::vector<std::string> names;
    std::vector<int> level(n_items);
    for (int i = 0; i < n_items; ++i) {
        names.push_back(std::string(kWords[uniform(0, 7)]) + " part " + std::to_string(i));
        level[i] = i < 3 ? 0 : uniform(0, kLevels - 1);  // at least three base items
    }

    std::set<std::string> gettable;
    for (int i = 0; i < n_items; ++i) {
        if (level[i] == 0 && uniform(0, 3) != 0) gettable.insert(names[i]);
    }

    std::vector<Recipe> recipes;
    const int n_recipes = uniform(1, params.max_recipes);
    for (int attempt = 0; attempt < 4 * n_recipes && static_cast<int>(recipes.size()) < n_recipes; ++attempt) {
        const int out = uniform(0, n_items - 1);
        if (level[out] == 0) continue;
        std::vector<int> lower;
        for (int i = 0; i < n_items; ++i) {
            if (level[i] < level[out]) lower.push_back(i);
        }
        if (lower.empty()) continue;
        std::shuffle(lower.begin(), lower.end(), rng);
        const int k = std::min<int>(uniform(1, params.max_ingredients), static_cast<int>(lower.size()));
        Recipe r;
        r.output_item = names[out];
        r.output_count = uniform(1, 4);
        for (int j = 0; j < k; ++j) r.ingredients.push_back(Ingredient{names[lower[j]], uniform(1, params.max_count)});
        recipes.push_back(std::move(r));
    }

    std::vector<int> candidates;
    for (int i = 0; i < n_items; ++i) {
        if (level[i] > 0) candidates.push_back(i);
    }
    const int goal = candidates.empty() ? uniform(0, n_items - 1)
                                        : candidates[uniform(0, static_cast<int>(candidates.size()) - 1)];
    return CraftWorld(std::move(recipes), std::move(gettable), names[goal]);
}

int parallel_workers() noexcept {
#ifdef WEAVE_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace weave
