#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "weave/environment.hpp"

namespace weave {

/// Lowercase, trimmed, internal whitespace runs collapsed to one space.
std::string normalize_item(std::string_view name);

struct Ingredient {
    std::string item;
    std::int64_t count = 1;
    bool operator==(const Ingredient&) const = default;
};

struct Recipe {
    std::string output_item;
    std::int64_t output_count = 1;
    std::vector<Ingredient> ingredients;

    /// "craft 3 dark oak sign using 6 dark oak planks, 1 stick"
    static Recipe parse(std::string_view command);
    std::string to_command() const;
    /// Ingredient multiset keyed by normalized name.
    std::map<std::string, std::int64_t> requirement() const;

    bool operator==(const Recipe&) const = default;
};

/// TextCraft-style world: recipes, unlimited base materials, an inventory.
class CraftWorld final : public Environment {
public:
    /// Throws std::invalid_argument when an invariant is broken (counts < 1,
    /// an item among its own ingredients, a gettable item with a recipe).
    CraftWorld(std::vector<Recipe> recipes, std::set<std::string> gettable, std::string goal);

    /// {"crafting_commands": [...], "gettable": [...], "goal": "..."}
    static CraftWorld from_json_text(std::string_view text);
    static CraftWorld load(const std::string& path);
    std::string to_json_text() const;

    std::string step(std::string_view action) override;
    bool success() const override;
    std::string task_header() const override;
    std::unique_ptr<Environment> clone() const override;

    const std::vector<Recipe>& recipes() const noexcept { return recipes_; }
    const std::set<std::string>& gettable() const noexcept { return gettable_; }
    const std::string& goal() const noexcept { return goal_; }
    const std::vector<std::string>& crafting_commands() const noexcept { return commands_; }
    std::int64_t count(std::string_view item) const;
    const std::map<std::string, std::int64_t>& inventory() const noexcept { return inventory_; }

private:
    std::string do_get(std::int64_t n, const std::string& item);
    std::string do_craft(std::string_view statement);
    std::string render_inventory() const;

    std::vector<Recipe> recipes_;
    std::vector<std::string> commands_;
    std::vector<std::string> gettable_source_;
    std::set<std::string> gettable_;
    std::string goal_;
    std::string goal_source_;
    std::map<std::string, std::int64_t> inventory_;
};

/// Reachability closure: an item is craftable iff it is gettable or some recipe
/// outputs it from craftable ingredients. Quantities do not matter because
/// base materials are unlimited.
bool craftable_oracle(const std::vector<Recipe>& recipes, const std::set<std::string>& gettable,
                      std::string_view item);

}  // namespace weave
