#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mg {

// Minimal s-expression tree shared by the atom text format, the mapping
// rule files and the grounding rule files. `;` starts a line comment.
struct SExpr {
    enum class Type { Symbol, String, List };

    Type type = Type::List;
    std::string text;  // symbol or unescaped string contents
    std::vector<SExpr> items;
    int line = 0;
    int column = 0;

    bool is_list() const { return type == Type::List; }
    bool is_symbol() const { return type == Type::Symbol; }
    bool is_string() const { return type == Type::String; }
    bool is_symbol(std::string_view s) const { return is_symbol() && text == s; }

    // Head symbol of a list, or empty.
    std::string_view head() const;
    [[noreturn]] void fail(const std::string& message) const;
};

std::vector<SExpr> parse_sexprs(std::string_view text);

std::string quote(std::string_view s);

}  // namespace mg
