#include "weave/craftworld.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "weave/parsing.hpp"

namespace weave {

namespace {

constexpr std::string_view kNothingHappens = "Nothing happens.";

std::optional<std::int64_t> parse_count(std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v < 1) return std::nullopt;
    return v;
}

// Splits "N rest" into (N, rest).
std::optional<std::pair<std::int64_t, std::string_view>> split_count(std::string_view s) {
    s = trim(s);
    const auto sp = s.find_first_of(" \t");
    if (sp == std::string_view::npos) return std::nullopt;
    auto n = parse_count(s.substr(0, sp));
    auto rest = trim(s.substr(sp + 1));
    if (!n || rest.empty()) return std::nullopt;
    return std::pair{*n, rest};
}

bool starts_with_word(std::string_view s, std::string_view word) {
    if (s.size() < word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != word[i]) return false;
    }
    return s.size() == word.size() || s[word.size()] == ' ' || s[word.size()] == '\t';
}

// Position of " using " (case-insensitive).
std::size_t find_using(std::string_view s) {
    for (std::size_t i = 0; i + 7 <= s.size(); ++i) {
        if ((s[i] == ' ' || s[i] == '\t') && starts_with_word(s.substr(i + 1), "using")) return i;
    }
    return std::string_view::npos;
}

}  // namespace

std::string normalize_item(std::string_view name) {
    std::string out;
    bool pending_space = false;
    for (char c : trim(name)) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = true;
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

Recipe Recipe::parse(std::string_view command) {
    auto s = trim(command);
    if (!starts_with_word(s, "craft")) throw std::invalid_argument("recipe must start with 'craft': " + std::string(command));
    s = trim(s.substr(5));
    const auto u = find_using(s);
    if (u == std::string_view::npos) throw std::invalid_argument("recipe needs 'using': " + std::string(command));
    auto head = split_count(s.substr(0, u));
    if (!head) throw std::invalid_argument("recipe output needs 'N item': " + std::string(command));

    Recipe r;
    r.output_count = head->first;
    r.output_item = std::string(head->second);
    auto rest = trim(s.substr(u + 1 + 5));
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        auto part = trim(rest.substr(0, comma));
        auto ing = split_count(part);
        if (!ing) throw std::invalid_argument("bad ingredient '" + std::string(part) + "' in: " + std::string(command));
        r.ingredients.push_back(Ingredient{std::string(ing->second), ing->first});
        if (comma == std::string_view::npos) break;
        rest = trim(rest.substr(comma + 1));
        if (rest.empty()) throw std::invalid_argument("trailing comma in: " + std::string(command));
    }
    if (r.ingredients.empty()) throw std::invalid_argument("recipe has no ingredients: " + std::string(command));
    return r;
}

std::string Recipe::to_command() const {
    std::string out = "craft " + std::to_string(output_count) + " " + output_item + " using ";
    for (std::size_t i = 0; i < ingredients.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(ingredients[i].count) + " " + ingredients[i].item;
    }
    return out;
}

std::map<std::string, std::int64_t> Recipe::requirement() const {
    std::map<std::string, std::int64_t> req;
    for (const auto& ing : ingredients) req[normalize_item(ing.item)] += ing.count;
    return req;
}

CraftWorld::CraftWorld(std::vector<Recipe> recipes, std::set<std::string> gettable, std::string goal)
    : recipes_(std::move(recipes)), gettable_source_(gettable.begin(), gettable.end()), goal_(normalize_item(goal)),
      goal_source_(std::move(goal)) {
    for (const auto& g : gettable) gettable_.insert(normalize_item(g));
    if (goal_.empty()) throw std::invalid_argument("craft world needs a goal item");
    for (const auto& r : recipes_) {
        const auto out = normalize_item(r.output_item);
        if (r.output_count < 1) throw std::invalid_argument("recipe output count must be >= 1");
        if (r.ingredients.empty()) throw std::invalid_argument("recipe for " + out + " has no ingredients");
        for (const auto& ing : r.ingredients) {
            if (ing.count < 1) throw std::invalid_argument("ingredient count must be >= 1");
            if (normalize_item(ing.item) == out) {
                throw std::invalid_argument("recipe for " + out + " lists its own output as ingredient");
            }
        }
        if (gettable_.contains(out)) {
            throw std::invalid_argument("gettable item '" + out + "' also has a recipe");
        }
        commands_.push_back(r.to_command());
    }
}

CraftWorld CraftWorld::from_json_text(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("craft world is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("craft world must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "crafting_commands" && key != "gettable" && key != "goal") {
            throw std::invalid_argument("unknown craft world key: " + key);
        }
    }
    if (!doc.contains("crafting_commands") || !doc["crafting_commands"].is_array() || !doc.contains("gettable") ||
        !doc["gettable"].is_array() || !doc.contains("goal") || !doc["goal"].is_string()) {
        throw std::invalid_argument("craft world needs crafting_commands[], gettable[] and goal");
    }
    std::vector<Recipe> recipes;
    std::vector<std::string> commands;
    for (const auto& c : doc["crafting_commands"]) {
        if (!c.is_string()) throw std::invalid_argument("crafting command must be a string");
        commands.push_back(c.get<std::string>());
        recipes.push_back(Recipe::parse(commands.back()));
    }
    std::set<std::string> gettable;
    std::vector<std::string> gettable_source;
    for (const auto& g : doc["gettable"]) {
        if (!g.is_string()) throw std::invalid_argument("gettable entry must be a string");
        gettable_source.push_back(g.get<std::string>());
        gettable.insert(gettable_source.back());
    }
    CraftWorld world(std::move(recipes), std::move(gettable), doc["goal"].get<std::string>());
    world.commands_ = std::move(commands);
    world.gettable_source_ = std::move(gettable_source);
    world.goal_source_ = doc["goal"].get<std::string>();
    return world;
}

CraftWorld CraftWorld::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open craft world: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string CraftWorld::to_json_text() const {
    nlohmann::ordered_json doc;
    doc["crafting_commands"] = commands_;
    doc["gettable"] = gettable_source_;
    doc["goal"] = goal_source_;
    return doc.dump(2) + "\n";
}

std::int64_t CraftWorld::count(std::string_view item) const {
    auto it = inventory_.find(normalize_item(item));
    return it == inventory_.end() ? 0 : it->second;
}

std::string CraftWorld::step(std::string_view action) {
    const auto a = trim(action);
    if (normalize_item(a) == "inventory") return render_inventory();
    if (starts_with_word(a, "get")) {
        auto parsed = split_count(a.substr(3));
        if (!parsed) return std::string(kNothingHappens);
        return do_get(parsed->first, normalize_item(parsed->second));
    }
    if (starts_with_word(a, "craft")) return do_craft(a);
    return std::string(kNothingHappens);
}

std::string CraftWorld::do_get(std::int64_t n, const std::string& item) {
    if (!gettable_.contains(item)) return "Could not find " + item + ".";
    inventory_[item] += n;
    return "Got " + std::to_string(n) + " " + item;
}

std::string CraftWorld::do_craft(std::string_view statement) {
    Recipe stated;
    try {
        stated = Recipe::parse(statement);
    } catch (const std::invalid_argument&) {
        return std::string(kNothingHappens);
    }
    const auto out = normalize_item(stated.output_item);
    const auto need = stated.requirement();
    const auto it = std::find_if(recipes_.begin(), recipes_.end(), [&](const Recipe& r) {
        return normalize_item(r.output_item) == out && r.output_count == stated.output_count && r.requirement() == need;
    });
    if (it == recipes_.end()) return "Could not find valid recipe for " + out + ".";
    for (const auto& [item, n] : need) {
        if (count(item) < n) return "Could not craft " + out + ".";
    }
    for (const auto& [item, n] : need) {
        auto& have = inventory_[item];
        have -= n;
        if (have == 0) inventory_.erase(item);
    }
    inventory_[out] += stated.output_count;
    return "Crafted " + std::to_string(stated.output_count) + " minecraft:" + out + ".";
}

std::string CraftWorld::render_inventory() const {
    if (inventory_.empty()) return "Inventory: You are not carrying anything.";
    std::string out = "Inventory:";
    for (const auto& [item, n] : inventory_) out += " [" + item + "] (" + std::to_string(n) + ")";
    return out;
}

bool CraftWorld::success() const { return count(goal_) >= 1; }

std::string CraftWorld::task_header() const {
    std::string out = "Crafting commands:\n";
    for (const auto& c : commands_) out += c + "\n";
    return out;
}

std::unique_ptr<Environment> CraftWorld::clone() const { return std::make_unique<CraftWorld>(*this); }

bool craftable_oracle(const std::vector<Recipe>& recipes, const std::set<std::string>& gettable,
                      std::string_view item) {
    std::set<std::string> reachable;
    for (const auto& g : gettable) reachable.insert(normalize_item(g));
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : recipes) {
            auto out = normalize_item(r.output_item);
            if (reachable.contains(out)) continue;
            const bool ready = std::all_of(r.ingredients.begin(), r.ingredients.end(), [&](const Ingredient& ing) {
                return reachable.contains(normalize_item(ing.item));
            });
            if (ready) {
                reachable.insert(std::move(out));
                changed = true;
            }
        }
    }
    return reachable.contains(normalize_item(item));
}

}  // namespace weave
