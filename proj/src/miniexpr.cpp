#include "weave/miniexpr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>

namespace weave {

namespace {

class Parser {
public:
    Parser(std::string_view src, const VariableStore& store) : src_(src), store_(store) {}

    std::optional<Value> parse_all() {
        skip_ws();
        auto v = parse_expr(0);
        if (!v) return std::nullopt;
        skip_ws();
        if (pos_ != src_.size()) return std::nullopt;
        return v;
    }

private:
    static constexpr int kMaxNesting = 64;

    std::string_view src_;
    const VariableStore& store_;
    std::size_t pos_ = 0;

    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return at_end() ? '\0' : src_[pos_]; }

    void skip_ws() {
        while (!at_end() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    }

    std::optional<Value> parse_expr(int nesting) {
        if (nesting > kMaxNesting) return std::nullopt;
        skip_ws();
        const char c = peek();
        if (c == '\'' || c == '"') return parse_string();
        if (c == '[') return parse_list(nesting);
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (c == '_' || std::isalpha(static_cast<unsigned char>(c))) return parse_reference();
        return std::nullopt;
    }

    std::optional<Value> parse_string() {
        const char quote = src_[pos_++];
        std::string out;
        while (!at_end()) {
            char c = src_[pos_++];
            if (c == quote) return Value(std::move(out));
            if (c == '\\' && !at_end()) {
                char e = src_[pos_++];
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case '\\':
                    case '\'':
                    case '"': out.push_back(e); break;
                    default:
                        out.push_back('\\');
                        out.push_back(e);
                }
                continue;
            }
            out.push_back(c);
        }
        return std::nullopt;
    }

    std::optional<std::string_view> scan_number_lexeme() {
        const std::size_t start = pos_;
        if (peek() == '-') ++pos_;
        auto digits = [&] {
            const std::size_t d = pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            return pos_ > d;
        };
        if (!digits()) {
            pos_ = start;
            return std::nullopt;
        }
        if (peek() == '.') {
            ++pos_;
            if (!digits()) {
                pos_ = start;
                return std::nullopt;
            }
        }
        if (peek() == 'e' || peek() == 'E') {
            const std::size_t mark = pos_;
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (!digits()) pos_ = mark;
        }
        // "3abc" is not a number.
        if (!at_end() && (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
            pos_ = start;
            return std::nullopt;
        }
        return src_.substr(start, pos_ - start);
    }

    std::optional<Value> parse_number() {
        auto lex = scan_number_lexeme();
        if (!lex) return std::nullopt;
        std::string text(*lex);
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || !std::isfinite(v)) return std::nullopt;
        return number_value(v, std::move(text));
    }

    std::optional<Value> parse_list(int nesting) {
        ++pos_;  // '['
        ValueList items;
        skip_ws();
        if (peek() == ']') {
            ++pos_;
            return Value(std::move(items));
        }
        while (true) {
            auto item = parse_expr(nesting + 1);
            if (!item) return std::nullopt;
            items.push_back(std::move(*item));
            skip_ws();
            if (peek() == ',') {
                ++pos_;
                skip_ws();
                if (peek() == ']') {
                    ++pos_;
                    return Value(std::move(items));
                }
                continue;
            }
            if (peek() == ']') {
                ++pos_;
                return Value(std::move(items));
            }
            return std::nullopt;
        }
    }

    std::string_view scan_identifier() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        return src_.substr(start, pos_ - start);
    }

    std::optional<Value> parse_reference() {
        const auto name = scan_identifier();
        const Value* bound = store_.find(name);
        if (!bound || bound->is_opaque()) return std::nullopt;
        Value current = *bound;
        while (true) {
            skip_ws();
            if (peek() != '[') break;
            ++pos_;
            skip_ws();
            std::optional<long long> index;
            if (peek() == '-' || std::isdigit(static_cast<unsigned char>(peek()))) {
                auto lex = scan_number_lexeme();
                if (!lex) return std::nullopt;
                long long i = 0;
                auto [p, ec] = std::from_chars(lex->data(), lex->data() + lex->size(), i);
                if (ec != std::errc{} || p != lex->data() + lex->size()) return std::nullopt;
                index = i;
            } else if (peek() == '_' || std::isalpha(static_cast<unsigned char>(peek()))) {
                const Value* iv = store_.find(scan_identifier());
                if (!iv || !iv->is_number()) return std::nullopt;
                const double d = iv->as_number().value;
                if (d != std::floor(d) || std::fabs(d) > 1e15) return std::nullopt;
                index = static_cast<long long>(d);
            } else {
                return std::nullopt;
            }
            skip_ws();
            if (peek() != ']') return std::nullopt;
            ++pos_;
            if (!current.is_list()) return std::nullopt;
            const auto& list = current.as_list();
            long long i = *index;
            const auto n = static_cast<long long>(list.size());
            if (i < 0) i += n;
            if (i < 0 || i >= n) return std::nullopt;
            Value next = list[static_cast<std::size_t>(i)];
            current = std::move(next);
        }
        return current;
    }
};

}  // namespace

std::optional<Value> evaluate_expression(std::string_view source, const VariableStore& store) {
    return Parser(source, store).parse_all();
}

}  // namespace weave
