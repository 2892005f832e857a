#include "weave/craft_planner.hpp"

#include <map>
#include <optional>
#include <set>

namespace weave {

namespace {

class Executor {
public:
    explicit Executor(CraftWorld& world) : world_(world) {}

    std::string act(const std::string& action) {
        run_.actions.push_back(action);
        return world_.step(action);
    }

    // Obtains `n` fresh units of `item`; plans only reference earlier-discovered items.
    bool acquire(const std::string& item, std::int64_t n) {
        const auto it = plans_.find(item);
        if (it == plans_.end()) return false;
        if (!it->second) return act("get " + std::to_string(n) + " " + item).starts_with("Got ");
        const Recipe& r = world_.recipes()[*it->second];
        const std::int64_t reps = (n + r.output_count - 1) / r.output_count;
        if (!acquire_ingredients(r, reps)) return false;
        for (std::int64_t i = 0; i < reps; ++i) {
            if (!act(r.to_command()).starts_with("Crafted ")) return false;
        }
        return true;
    }

    bool acquire_ingredients(const Recipe& r, std::int64_t reps) {
        for (const auto& [item, n] : r.requirement()) {
            if (!acquire(item, n * reps)) return false;
        }
        return true;
    }

    PlanRun run() {
        std::set<std::string> items{world_.goal()};
        for (const auto& r : world_.recipes()) {
            items.insert(normalize_item(r.output_item));
            for (const auto& ing : r.ingredients) items.insert(normalize_item(ing.item));
        }
        for (const auto& item : items) {
            if (act("get 1 " + item).starts_with("Got ")) plans_.emplace(item, std::nullopt);
        }
        bool grew = true;
        while (grew) {
            grew = false;
            const auto frontier = plans_;
            for (std::size_t i = 0; i < world_.recipes().size(); ++i) {
                const Recipe& r = world_.recipes()[i];
                const auto out = normalize_item(r.output_item);
                if (plans_.contains(out)) continue;
                bool ready = true;
                for (const auto& [item, _] : r.requirement()) ready = ready && frontier.contains(item);
                if (!ready || !acquire_ingredients(r, 1)) continue;
                if (act(r.to_command()).starts_with("Crafted ")) {
                    plans_.emplace(out, i);
                    grew = true;
                }
            }
        }
        if (!world_.success() && plans_.contains(world_.goal())) acquire(world_.goal(), 1);
        run_.reached = world_.success();
        return std::move(run_);
    }

private:
    CraftWorld& world_;
    std::map<std::string, std::optional<std::size_t>> plans_;
    PlanRun run_;
};

}  // namespace

PlanRun bfs_plan_execute(CraftWorld world) {
    return Executor(world).run();
}

}  // namespace weave
