#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <iterator>
#include <utility>

#include "weave/variables.hpp"

namespace weave::testing {

// Expression trees generated independently of the parser; the expected value
// is computed from the tree, never by parsing its text.
struct ExprGen {
    std::mt19937_64 rng;
    VariableStore store;
    int next_index_var = 0;

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    bool coin() { return uniform(0, 1) == 1; }

    std::string ws() {
        static const char* kPads[] = {"", "", " ", "  ", "\t"};
        return kPads[uniform(0, 4)];
    }

    std::string raw_string() {
        static const std::string kChars = "abcXYZ 019_-.,;:!?'\"\\[]{}()";
        std::string s;
        const int n = uniform(0, 8);
        for (int i = 0; i < n; ++i) s.push_back(kChars[uniform(0, static_cast<int>(kChars.size()) - 1)]);
        return s;
    }

    // Returns (source, expected).
    std::pair<std::string, std::optional<Value>> literal(int depth) {
        switch (depth > 2 ? uniform(0, 1) : uniform(0, 2)) {
            case 0: {
                const std::string s = raw_string();
                const char q = coin() ? '\'' : '"';
                std::string src(1, q);
                for (char c : s) {
                    if (c == q || c == '\\') src.push_back('\\');
                    src.push_back(c);
                }
                src.push_back(q);
                return {src, Value(s)};
            }
            case 1: {
                const bool neg = uniform(0, 3) == 0;
                const int whole = uniform(0, 100000);
                const int frac_digits = uniform(0, 3);
                std::string lex = (neg ? "-" : "") + std::to_string(whole);
                double v = whole;
                if (frac_digits > 0) {
                    lex += ".";
                    double scale = 1.0;
                    int frac = 0;
                    for (int i = 0; i < frac_digits; ++i) {
                        const int d = uniform(0, 9);
                        lex.push_back(static_cast<char>('0' + d));
                        frac = frac * 10 + d;
                        scale *= 10.0;
                    }
                    v += frac / scale;
                }
                return {lex, Value(Number{neg ? -v : v, lex})};
            }
            default: {
                const int n = uniform(0, 4);
                std::string src = "[" + ws();
                ValueList items;
                bool ok = true;
                for (int i = 0; i < n; ++i) {
                    auto [s, v] = expr(depth + 1);
                    if (i) src += ws() + "," + ws();
                    src += s;
                    if (v) items.push_back(*v);
                    else ok = false;
                }
                if (n > 0 && uniform(0, 4) == 0) src += ",";
                src += ws() + "]";
                if (!ok) return {src, std::nullopt};
                return {src, Value(std::move(items))};
            }
        }
    }

    std::pair<std::string, std::optional<Value>> expr(int depth) {
        const int pick = uniform(0, 9);
        if (pick < 6 || store.empty()) return literal(depth);
        // Reference, possibly indexed.
        const auto [name, value] = *std::next(store.begin(), uniform(0, static_cast<int>(store.size()) - 1));
        if (value.is_opaque()) return {pick >= 8 ? name + "[0]" : name, std::nullopt};
        if (pick < 8 || !value.is_list()) {
            if (pick >= 8) {  // index into a non-list
                return {name + ws() + "[0]", std::nullopt};
            }
            return {name, value};
        }
        const auto& list = value.as_list();
        const int n = static_cast<int>(list.size());
        const int i = uniform(-n - 1, n);
        std::optional<Value> expected;
        const int norm = i < 0 ? i + n : i;
        if (norm >= 0 && norm < n) expected = list[norm];
        if (coin()) {
            const std::string iv = "k" + std::to_string(next_index_var++);
            store.bind(iv, Value(Number{static_cast<double>(i), std::to_string(i)}));
            return {name + ws() + "[" + ws() + iv + ws() + "]", expected};
        }
        return {name + "[" + ws() + std::to_string(i) + ws() + "]", expected};
    }

    void seed_store() {
        store = {};
        const int n = uniform(0, 4);
        for (int i = 0; i < n; ++i) {
            auto [src, v] = literal(1);
            if (v) store.bind("var" + std::to_string(i), *v);
        }
        if (coin()) store.bind("opaque_thing", Opaque{"f(x)"});
    }
};

/// Structural equality with a relative tolerance on number values.
bool same_value(const Value& a, const Value& b);

struct ExprSweep {
    int evaluated = 0;
    int rejected = 0;
    int mismatches = 0;
    std::string first_mismatch;
};

/// Random expressions checked against the tree-computed expectation.
ExprSweep miniexpr_sweep(std::uint64_t seed, int cases);

}  // namespace weave::testing
