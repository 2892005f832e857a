#include "weave/variables.hpp"

#include <algorithm>
#include <stdexcept>

namespace weave {

namespace {

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

std::string escape_braces(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        out.push_back(c);
        if (c == '{' || c == '}') out.push_back(c);
    }
    return out;
}

std::string quote_string(const std::string& s) {
    const bool has_single = s.find('\'') != std::string::npos;
    const bool has_double = s.find('"') != std::string::npos;
    const char q = (has_single && !has_double) ? '"' : '\'';
    std::string out(1, q);
    for (char c : s) {
        if (c == '\\' || c == q) out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    out.push_back(q);
    return out;
}

std::string render_raw(const Value& value, bool nested) {
    return std::visit(
        [nested](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return nested ? quote_string(v) : v;
            } else if constexpr (std::is_same_v<T, Number>) {
                return v.lexeme;
            } else if constexpr (std::is_same_v<T, ValueList>) {
                std::string out = "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) out += ", ";
                    out += render_raw(v[i], true);
                }
                out += "]";
                return out;
            } else {
                return v.source;
            }
        },
        value.data);
}

}  // namespace

Value number_value(double v, std::string lexeme) {
    return Value(Number{v, std::move(lexeme)});
}

bool is_identifier(std::string_view name) noexcept {
    if (name.empty() || !is_ident_start(name.front())) return false;
    return std::all_of(name.begin(), name.end(), is_ident_char);
}

std::string render_value(const Value& value) {
    return escape_braces(render_raw(value, false));
}

std::string render_list_element(const Value& value) {
    return render_raw(value, true);
}

void VariableStore::bind(std::string name, Value value) {
    if (!is_identifier(name)) {
        throw std::invalid_argument("invalid variable name: " + name);
    }
    erase(name);
    bindings_.emplace_back(std::move(name), std::move(value));
}

const Value* VariableStore::find(std::string_view name) const noexcept {
    for (const auto& [k, v] : bindings_) {
        if (k == name) return &v;
    }
    return nullptr;
}

bool VariableStore::erase(std::string_view name) {
    auto it = std::find_if(bindings_.begin(), bindings_.end(),
                           [&](const Binding& b) { return b.first == name; });
    if (it == bindings_.end()) return false;
    bindings_.erase(it);
    return true;
}

}  // namespace weave
