#pragma once

#include <optional>
#include <string_view>

#include "weave/variables.hpp"

namespace weave {

/// Evaluates the small assignment-rhs grammar:
///
///   expr  := string | number | list | ref index*
///   list  := '[' (expr (',' expr)* ','?)? ']'
///   index := '[' (integer | identifier) ']'
///
/// Strings take single or double quotes. A reference must name a bound,
/// non-opaque value; an index must land inside a list (negative counts from
/// the end). Returns nullopt for anything else, including trailing input.
std::optional<Value> evaluate_expression(std::string_view source, const VariableStore& store);

}  // namespace weave
