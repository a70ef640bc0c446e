#include "mg/sexpr.hpp"

#include <cctype>

#include "mg/error.hpp"

namespace mg {

std::string_view SExpr::head() const {
    if (is_list() && !items.empty() && items.front().is_symbol()) return items.front().text;
    return {};
}

void SExpr::fail(const std::string& message) const { throw ParseError(message, line, column); }

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        skip();
        while (pos_ < text_.size()) {
            out.push_back(read());
            skip();
        }
        return out;
    }

private:
    char peek() const { return text_[pos_]; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip() {
        while (pos_ < text_.size()) {
            char c = peek();
            if (c == ';') {
                while (pos_ < text_.size() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        SExpr e;
        e.line = line_;
        e.column = col_;
        char c = peek();
        if (c == '(') {
            advance();
            e.type = SExpr::Type::List;
            skip();
            while (true) {
                if (pos_ >= text_.size()) throw ParseError("unterminated list", e.line, e.column);
                if (peek() == ')') {
                    advance();
                    break;
                }
                e.items.push_back(read());
                skip();
            }
        } else if (c == ')') {
            throw ParseError("unexpected ')'", line_, col_);
        } else if (c == '"') {
            advance();
            e.type = SExpr::Type::String;
            while (true) {
                if (pos_ >= text_.size()) throw ParseError("unterminated string", e.line, e.column);
                char s = peek();
                advance();
                if (s == '"') break;
                if (s == '\\') {
                    if (pos_ >= text_.size()) throw ParseError("unterminated string", e.line, e.column);
                    s = peek();
                    advance();
                    if (s == 'n') s = '\n';
                }
                e.text.push_back(s);
            }
        } else {
            e.type = SExpr::Type::Symbol;
            while (pos_ < text_.size()) {
                char s = peek();
                if (std::isspace(static_cast<unsigned char>(s)) || s == '(' || s == ')' || s == '"' || s == ';')
                    break;
                e.text.push_back(s);
                advance();
            }
        }
        return e;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) { return Reader(text).read_all(); }

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace mg
