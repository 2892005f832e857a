#include "weave/parsing.hpp"

#include <algorithm>
#include <stdexcept>

#include "weave/miniexpr.hpp"

namespace weave {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n\f\v";
constexpr std::string_view kFinalAnswerMarker = "Final Answer:";

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

std::string_view ltrim(std::string_view s) {
    const auto b = s.find_first_not_of(kWhitespace);
    return b == std::string_view::npos ? std::string_view{} : s.substr(b);
}

std::string_view strip_trailing_listen(std::string_view s, const ControlTokens& control) {
    s = trim(s);
    if (s.ends_with(control.listen_token)) {
        s.remove_suffix(control.listen_token.size());
        s = trim(s);
    }
    return s;
}

std::string_view cut_at_end_token(std::string_view s, const ControlTokens& control) {
    const auto p = s.find(control.end_token);
    return p == std::string_view::npos ? s : s.substr(0, p);
}

std::optional<std::string_view> print_payload_of(std::string_view line) {
    line = trim(line);
    if (!line.starts_with("print(") || !line.ends_with(")")) return std::nullopt;
    auto inner = trim(line.substr(6, line.size() - 7));
    if (inner.size() >= 3 && std::string_view("fFrRbBuU").find(inner.front()) != std::string_view::npos &&
        (inner[1] == '\'' || inner[1] == '"')) {
        inner.remove_prefix(1);
    }
    if (inner.size() < 2) return std::nullopt;
    const char q = inner.front();
    if ((q != '\'' && q != '"') || inner.back() != q) return std::nullopt;
    return inner.substr(1, inner.size() - 2);
}

// Splits `name = rhs`; rejects `==`, augmented assignment and non-identifier targets.
std::optional<std::pair<std::string_view, std::string_view>> split_assignment(std::string_view line) {
    line = trim(line);
    std::size_t i = 0;
    if (line.empty() || !is_ident_start(line[0])) return std::nullopt;
    while (i < line.size() && is_ident_char(line[i])) ++i;
    const auto name = line.substr(0, i);
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size() || line[i] != '=') return std::nullopt;
    if (i + 1 < line.size() && line[i + 1] == '=') return std::nullopt;
    const auto rhs = trim(line.substr(i + 1));
    if (rhs.empty()) return std::nullopt;
    return std::pair{name, rhs};
}

}  // namespace

void ControlTokens::validate() const {
    const std::string* tokens[] = {&listen_token, &end_token, &child_close_token, &action_prefix};
    for (const auto* t : tokens) {
        if (t->empty()) throw std::invalid_argument("control tokens must be non-empty");
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            if (*tokens[i] == *tokens[j]) {
                throw std::invalid_argument("control tokens must be pairwise distinct: '" + *tokens[i] + "'");
            }
        }
    }
    for (const auto* t : {&listen_token, &end_token}) {
        if (t->find(child_close_token) != std::string::npos || child_close_token.find(*t) != std::string::npos) {
            throw std::invalid_argument("child close token overlaps '" + *t + "'");
        }
    }
}

void Limits::validate() const {
    if (max_depth <= 0 || max_generator_calls_total <= 0 || max_chunk_chars <= 0 || max_children_per_thread <= 0) {
        throw std::invalid_argument("all limits must be strictly positive");
    }
}

std::string_view to_string(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::Listen: return "Listen";
        case StopReason::EndOfOutput: return "EndOfOutput";
        case StopReason::Length: return "Length";
    }
    return "EndOfOutput";
}

std::optional<StopReason> parse_stop_reason(std::string_view text) noexcept {
    if (text == "Listen") return StopReason::Listen;
    if (text == "EndOfOutput") return StopReason::EndOfOutput;
    if (text == "Length") return StopReason::Length;
    return std::nullopt;
}

std::string_view trim(std::string_view s) noexcept {
    const auto b = s.find_first_not_of(kWhitespace);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(kWhitespace);
    return s.substr(b, e - b + 1);
}

std::string_view last_nonempty_line(std::string_view text) noexcept {
    std::size_t end = text.size();
    while (true) {
        const auto nl = end == 0 ? std::string_view::npos : text.rfind('\n', end - 1);
        const std::size_t begin = nl == std::string_view::npos ? 0 : nl + 1;
        const auto line = text.substr(begin, end - begin);
        if (!trim(line).empty()) {
            return line.ends_with('\r') ? line.substr(0, line.size() - 1) : line;
        }
        if (nl == std::string_view::npos) return {};
        end = nl;
    }
}

Interpolated interpolate(std::string_view text, const VariableStore& store) {
    Interpolated out;
    out.text.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c != '{') {
            out.text.push_back(c);
            ++i;
            continue;
        }
        if (i + 1 < text.size() && text[i + 1] == '{') {
            out.text += "{{";
            i += 2;
            continue;
        }
        std::size_t j = i + 1;
        if (j < text.size() && is_ident_start(text[j])) {
            while (j < text.size() && is_ident_char(text[j])) ++j;
            if (j < text.size() && text[j] == '}') {
                const auto name = text.substr(i + 1, j - i - 1);
                const Value* v = store.find(name);
                if (v && !v->is_opaque()) {
                    out.text += render_value(*v);
                } else {
                    out.text.append(text.substr(i, j - i + 1));
                    if (std::find(out.unresolved.begin(), out.unresolved.end(), name) == out.unresolved.end()) {
                        out.unresolved.emplace_back(name);
                    }
                }
                i = j + 1;
                continue;
            }
        }
        out.text.push_back(c);
        ++i;
    }
    return out;
}

Continuation classify_continuation(std::string_view chunk, StopReason stop_reason, const VariableStore& store,
                                   const ControlTokens& control, std::string_view prior) {
    if (const auto p = chunk.find(control.end_token); p != std::string_view::npos) {
        return End{p + control.end_token.size()};
    }
    if (stop_reason != StopReason::Listen) return Exhausted{};

    std::string joined;
    std::string_view text = chunk;
    if (!prior.empty()) {
        joined.reserve(prior.size() + chunk.size());
        joined.append(prior).append(chunk);
        text = joined;
    }
    const auto line = strip_trailing_listen(last_nonempty_line(text), control);

    auto candidate = line;
    if (candidate.starts_with('#')) candidate = ltrim(candidate.substr(1));
    if (candidate.starts_with(control.action_prefix)) {
        auto r = interpolate(extract_action(candidate, control), store);
        return Action{std::move(r.text), std::move(r.unresolved)};
    }
    auto r = interpolate(line, store);
    return Spawn{std::move(r.text), std::move(r.unresolved)};
}

Interpolated phi(std::string_view parent_sequence, const VariableStore& store, const ControlTokens& control) {
    auto seq = trim(parent_sequence);
    if (seq.ends_with(control.listen_token)) seq.remove_suffix(control.listen_token.size());
    const auto line = strip_trailing_listen(last_nonempty_line(seq), control);
    if (line.empty()) throw ParseError(ParseErrc::EmptyParentLine, "no non-empty line before the listen point");
    return interpolate(line, store);
}

std::vector<std::pair<std::string, Value>> parse_assignments(std::string_view chunk, const VariableStore& store) {
    std::vector<std::pair<std::string, Value>> out;
    VariableStore working = store;
    std::size_t start = 0;
    while (start <= chunk.size()) {
        auto nl = chunk.find('\n', start);
        if (nl == std::string_view::npos) nl = chunk.size();
        if (auto a = split_assignment(chunk.substr(start, nl - start))) {
            auto [name, rhs] = *a;
            auto value = evaluate_expression(rhs, working);
            Value bound = value ? std::move(*value) : Value(Opaque{std::string(rhs)});
            working.bind(std::string(name), bound);
            out.emplace_back(std::string(name), std::move(bound));
        }
        start = nl + 1;
    }
    return out;
}

std::string extract_print_payload(std::string_view child_sequence, const ControlTokens& control) {
    auto text = cut_at_end_token(child_sequence, control);
    std::size_t end = text.size();
    while (true) {
        const auto nl = end == 0 ? std::string_view::npos : text.rfind('\n', end - 1);
        const std::size_t begin = nl == std::string_view::npos ? 0 : nl + 1;
        if (auto payload = print_payload_of(text.substr(begin, end - begin))) return std::string(*payload);
        if (nl == std::string_view::npos) break;
        end = nl;
    }
    throw ParseError(ParseErrc::MalformedChildOutput, "child sequence has no print('...') line");
}

std::string extract_action(std::string_view line, const ControlTokens& control) {
    const auto p = line.find(control.action_prefix);
    if (p == std::string_view::npos) return std::string(trim(line));
    return std::string(trim(line.substr(p + control.action_prefix.size())));
}

std::optional<std::string> extract_final_answer(std::string_view sequence, const ControlTokens& control) {
    const auto p = sequence.rfind(kFinalAnswerMarker);
    if (p == std::string_view::npos) return std::nullopt;
    auto rest = sequence.substr(p + kFinalAnswerMarker.size());
    rest = rest.substr(0, rest.find('\n'));
    rest = trim(cut_at_end_token(rest, control));
    if (rest.empty()) return std::nullopt;
    return std::string(rest);
}

}  // namespace weave
