#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace weave {

/// Numeric literal. The source lexeme is kept so that `50.00` renders back as
/// `50.00` inside child contexts.
struct Number {
    double value = 0.0;
    std::string lexeme;

    bool operator==(const Number&) const = default;
};

/// Right-hand side that is outside the expression grammar; kept as raw text.
struct Opaque {
    std::string source;

    bool operator==(const Opaque&) const = default;
};

struct Value;
using ValueList = std::vector<Value>;

struct Value {
    std::variant<std::string, Number, ValueList, Opaque> data;

    Value() = default;
    Value(std::string s) : data(std::move(s)) {}
    Value(const char* s) : data(std::string(s)) {}
    Value(Number n) : data(std::move(n)) {}
    Value(ValueList l) : data(std::move(l)) {}
    Value(Opaque o) : data(std::move(o)) {}

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_number() const { return std::holds_alternative<Number>(data); }
    bool is_list() const { return std::holds_alternative<ValueList>(data); }
    bool is_opaque() const { return std::holds_alternative<Opaque>(data); }

    const std::string& as_string() const { return std::get<std::string>(data); }
    const Number& as_number() const { return std::get<Number>(data); }
    const ValueList& as_list() const { return std::get<ValueList>(data); }
    const Opaque& as_opaque() const { return std::get<Opaque>(data); }

    bool operator==(const Value&) const = default;
};

Value number_value(double v, std::string lexeme);

/// Letters, digits, underscore; no leading digit.
bool is_identifier(std::string_view name) noexcept;

/// Text placed in `{name}` slots. Strings are bare, numbers use their lexeme,
/// lists are bracketed with quoted elements. Braces are doubled so the result
/// never introduces placeholder syntax.
std::string render_value(const Value& value);

/// Python-like element rendering used inside lists (strings quoted). No brace escaping.
std::string render_list_element(const Value& value);

/// Ordered name -> value map. Rebinding replaces the value and moves the name
/// to the end, so iteration follows the order of latest binding.
class VariableStore {
public:
    using Binding = std::pair<std::string, Value>;
    using const_iterator = std::vector<Binding>::const_iterator;

    /// Throws std::invalid_argument for non-identifier names.
    void bind(std::string name, Value value);
    const Value* find(std::string_view name) const noexcept;
    bool contains(std::string_view name) const noexcept { return find(name) != nullptr; }
    bool erase(std::string_view name);

    std::size_t size() const noexcept { return bindings_.size(); }
    bool empty() const noexcept { return bindings_.empty(); }
    const_iterator begin() const noexcept { return bindings_.begin(); }
    const_iterator end() const noexcept { return bindings_.end(); }

    bool operator==(const VariableStore&) const = default;

private:
    std::vector<Binding> bindings_;
};

}  // namespace weave
