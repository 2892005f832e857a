#pragma once

#include <string>
#include <vector>

#include "weave/craftworld.hpp"

namespace weave {

struct PlanRun {
    bool reached = false;
    std::vector<std::string> actions;
};

/// Drives a CraftWorld purely through its text actions. Obtainable items are
/// discovered in breadth-first waves: wave 0 probes `get` on every item, each
/// later wave attempts every recipe whose ingredients were all obtainable at
/// the start of the wave. The goal is then built from the discovered plans.
/// The world is taken by value; the caller's copy is untouched.
PlanRun bfs_plan_execute(CraftWorld world);

}  // namespace weave
