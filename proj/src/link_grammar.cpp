#include "mg/link_grammar.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_set>

#include "mg/error.hpp"

namespace mg {

namespace {

bool label_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

bool valid_label(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), label_char);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::size_t upper_head(std::string_view s) {
    std::size_t n = 0;
    while (n < s.size() && std::isupper(static_cast<unsigned char>(s[n]))) ++n;
    return n;
}

// ---- dictionary text scanner ----

class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    bool eof() {
        skip();
        return pos_ >= text_.size();
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool starts_with(std::string_view s) const { return text_.substr(pos_).substr(0, s.size()) == s; }
    int line() const { return line_; }
    int col() const { return col_; }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, col_); }

    // A dictionary word: anything up to whitespace, ':' or ';'.
    std::string word() {
        skip();
        std::string out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == ':' || c == ';' || c == '%') break;
            out.push_back(c);
            advance();
        }
        return out;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class ExprParser {
public:
    explicit ExprParser(Scanner& s) : s_(s) {}

    ConnectorExpr parse_or() {
        ConnectorExpr first = parse_and();
        if (!at_or()) return first;
        ConnectorExpr node;
        node.op = ConnectorExpr::Op::Or;
        node.children.push_back(std::move(first));
        while (at_or()) {
            consume_op();
            node.children.push_back(parse_and());
        }
        return node;
    }

private:
    bool at_keyword(std::string_view kw) {
        s_.skip();
        if (!s_.starts_with(kw)) return false;
        // keyword only when not followed by more label characters or a direction
        Scanner probe = s_;
        probe.advance(kw.size());
        char c = probe.peek();
        return !label_char(c) && c != '+';
    }
    bool at_or() {
        s_.skip();
        return s_.peek() == '|' || s_.starts_with("\xE2\x88\xA8") || at_keyword("or");
    }
    bool at_and() {
        s_.skip();
        return s_.peek() == '&' || s_.starts_with("\xE2\x88\xA7") || at_keyword("and");
    }
    void consume_op() {
        s_.skip();
        if (s_.peek() == '|' || s_.peek() == '&') {
            s_.advance();
        } else if (s_.starts_with("\xE2\x88")) {
            s_.advance(3);
        } else if (s_.starts_with("and")) {
            s_.advance(3);
        } else {
            s_.advance(2);
        }
    }

    ConnectorExpr parse_and() {
        ConnectorExpr first = parse_factor();
        if (!at_and()) return first;
        ConnectorExpr node;
        node.op = ConnectorExpr::Op::And;
        node.children.push_back(std::move(first));
        while (at_and()) {
            consume_op();
            node.children.push_back(parse_factor());
        }
        return node;
    }

    ConnectorExpr parse_factor() {
        s_.skip();
        char c = s_.peek();
        if (c == '(') {
            s_.advance();
            s_.skip();
            if (s_.peek() == ')') {
                s_.advance();
                return ConnectorExpr{};
            }
            ConnectorExpr inner = parse_or();
            s_.skip();
            if (s_.peek() != ')') s_.fail("expected ')'");
            s_.advance();
            return inner;
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) {
            if (c == '\0') s_.fail("unexpected end of input");
            if (c == ';' || c == ')') s_.fail("expected a connector");
            s_.fail(std::string("unknown character '") + c + "'");
        }
        int line = s_.line(), col = s_.col();
        std::string text;
        while (label_char(s_.peek())) {
            text.push_back(s_.peek());
            s_.advance();
        }
        if (s_.peek() == '+') {
            text.push_back('+');
            s_.advance();
        }
        try {
            ConnectorExpr leaf;
            leaf.op = ConnectorExpr::Op::Leaf;
            leaf.leaf = parse_connector(text);
            return leaf;
        } catch (const ParseError&) {
            throw ParseError("bad connector '" + text + "'", line, col);
        }
    }

    Scanner& s_;
};

}  // namespace

Connector parse_connector(std::string_view text) {
    if (text.size() < 2) throw ParseError("bad connector '" + std::string(text) + "'", 1, 1);
    char dir = text.back();
    std::string_view label = text.substr(0, text.size() - 1);
    if ((dir != '+' && dir != '-') || !valid_label(label))
        throw ParseError("bad connector '" + std::string(text) + "'", 1, 1);
    return Connector{std::string(label), dir};
}

bool labels_match(std::string_view a, std::string_view b) {
    std::size_t ha = upper_head(a), hb = upper_head(b);
    if (ha == 0 || hb == 0 || a.find_first_of("_-") != std::string_view::npos ||
        b.find_first_of("_-") != std::string_view::npos)
        return a == b;
    if (a.substr(0, ha) != b.substr(0, hb)) return false;
    std::string_view sa = a.substr(ha), sb = b.substr(hb);
    std::size_t n = std::min(sa.size(), sb.size());
    return sa.substr(0, n) == sb.substr(0, n);
}

std::string link_label(std::string_view a, std::string_view b) {
    return std::string(b.size() > a.size() ? b : a);
}

ConnectorExpr parse_expr(std::string_view text) {
    Scanner s(text);
    ExprParser p(s);
    ConnectorExpr e = p.parse_or();
    if (!s.eof()) s.fail("unexpected text after expression");
    return e;
}

std::string Disjunct::to_string() const {
    std::string out;
    for (const auto& c : left) out += (out.empty() ? "" : " ") + c.to_string();
    for (const auto& c : right) out += (out.empty() ? "" : " ") + c.to_string();
    return out.empty() ? "()" : out;
}

std::vector<Disjunct> expand(const ConnectorExpr& expr) {
    std::vector<Disjunct> out;
    switch (expr.op) {
        case ConnectorExpr::Op::Empty: out.push_back({}); break;
        case ConnectorExpr::Op::Leaf: {
            Disjunct d;
            (expr.leaf.dir == '-' ? d.left : d.right).push_back(expr.leaf);
            out.push_back(std::move(d));
            break;
        }
        case ConnectorExpr::Op::Or:
            for (const auto& c : expr.children) {
                auto sub = expand(c);
                out.insert(out.end(), sub.begin(), sub.end());
            }
            break;
        case ConnectorExpr::Op::And: {
            out.push_back({});
            for (const auto& c : expr.children) {
                auto sub = expand(c);
                std::vector<Disjunct> next;
                for (const auto& a : out)
                    for (const auto& b : sub) {
                        Disjunct d;
                        d.left = a.left;
                        d.left.insert(d.left.end(), b.left.begin(), b.left.end());
                        d.right = a.right;
                        d.right.insert(d.right.end(), b.right.begin(), b.right.end());
                        next.push_back(std::move(d));
                    }
                out = std::move(next);
            }
            break;
        }
    }
    std::vector<Disjunct> unique;
    for (auto& d : out)
        if (std::find(unique.begin(), unique.end(), d) == unique.end()) unique.push_back(std::move(d));
    return unique;
}

// ---- Dictionary ----

std::string Dictionary::key(std::string_view word) { return lower(word); }

bool Dictionary::in(const std::map<std::string, bool>& m, std::string_view token) {
    return m.count(key(token)) > 0;
}

Dictionary Dictionary::load(std::string_view text) {
    Dictionary d;
    Scanner s(text);
    while (!s.eof()) {
        if (s.peek() == '#') {
            int line = s.line(), col = s.col();
            s.advance();
            std::string name = s.word();
            if (name.empty()) throw ParseError("missing annotation name", line, col);
            std::vector<std::string> args;
            while (true) {
                s.skip();
                if (s.peek() == ';') {
                    s.advance();
                    break;
                }
                if (s.peek() == '\0') throw ParseError("annotation without ';'", line, col);
                std::string w = s.word();
                if (w.empty()) s.fail(std::string("unknown character '") + s.peek() + "'");
                args.push_back(std::move(w));
            }
            auto need = [&](std::size_t n) {
                if (args.size() != n) throw ParseError("#" + name + " takes " + std::to_string(n) + " arguments", line, col);
            };
            auto mark = [&](std::map<std::string, bool>& m) {
                for (auto& a : args) {
                    if (&m == &d.function_ && !m.count(key(a))) d.function_list_.push_back(key(a));
                    m[key(a)] = true;
                }
            };
            if (name == "lemma") {
                need(2);
                d.lemma_[key(args[0])] = args[1];
            } else if (name == "pred") {
                need(2);
                d.pred_[args[0]] = args[1];
            } else if (name == "gender") {
                if (args.size() != 2 && args.size() != 3)
                    throw ParseError("#gender takes a word, a gender and an optional logic concept", line, col);
                d.gender_[key(args[0])] = args[1];
            } else if (name == "proper") {
                mark(d.proper_);
            } else if (name == "plural") {
                mark(d.plural_);
            } else if (name == "copula") {
                mark(d.copula_);
            } else if (name == "relprep") {
                mark(d.relprep_);
            } else if (name == "function") {
                mark(d.function_);
            }
            d.annotations_[name].push_back(std::move(args));
            continue;
        }
        std::vector<std::pair<std::string, std::pair<int, int>>> words;
        while (true) {
            s.skip();
            int line = s.line(), col = s.col();
            if (s.peek() == ':') {
                s.advance();
                break;
            }
            if (s.peek() == '\0') s.fail("expected ':'");
            if (s.peek() == ';') s.fail("expected ':' before ';'");
            words.emplace_back(s.word(), std::make_pair(line, col));
        }
        if (words.empty()) s.fail("entry without words");
        ExprParser p(s);
        ConnectorExpr expr = p.parse_or();
        s.skip();
        if (s.peek() != ';') s.fail("expected ';'");
        s.advance();
        auto disjuncts = expand(expr);
        for (auto& [w, pos] : words) {
            WordEntry e;
            auto dot = w.rfind('.');
            if (dot != std::string::npos && dot > 0 && dot + 1 < w.size()) {
                e.word = w.substr(0, dot);
                e.subscript = w.substr(dot);
            } else {
                e.word = w;
            }
            e.expr = expr;
            e.disjuncts = disjuncts;
            std::string k = key(e.word);
            if (d.entries_.count(k))
                d.warnings_.push_back("duplicate entry for '" + e.word + "' at line " + std::to_string(pos.first) +
                                      ", later entry wins");
            d.longest_idiom_ = std::max<std::size_t>(d.longest_idiom_, 1 + std::count(k.begin(), k.end(), '_'));
            d.entries_[k] = std::move(e);
        }
    }
    return d;
}

const WordEntry* Dictionary::find(std::string_view word) const {
    auto it = entries_.find(key(word));
    return it == entries_.end() ? nullptr : &it->second;
}

const WordEntry* Dictionary::lookup(std::string_view token) const {
    if (const WordEntry* e = find(token)) return e;
    if (all_digits(token)) return find("NUMBER");
    return nullptr;
}

std::vector<std::string> Dictionary::tokenize(std::string_view sentence) const {
    std::vector<std::string> raw;
    std::size_t i = 0;
    while (i < sentence.size()) {
        while (i < sentence.size() && std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
        std::size_t j = i;
        while (j < sentence.size() && !std::isspace(static_cast<unsigned char>(sentence[j]))) ++j;
        std::string_view chunk = sentence.substr(i, j - i);
        i = j;
        if (chunk.empty()) continue;
        std::vector<std::string> tail;
        while (chunk.size() > 1 && (chunk.back() == '.' || chunk.back() == ',') && !find(chunk)) {
            tail.insert(tail.begin(), std::string(1, chunk.back()));
            chunk.remove_suffix(1);
        }
        raw.emplace_back(chunk);
        raw.insert(raw.end(), tail.begin(), tail.end());
    }
    std::vector<std::string> out;
    for (std::size_t k = 0; k < raw.size();) {
        std::size_t take = 1;
        for (std::size_t n = std::min(longest_idiom_, raw.size() - k); n >= 2; --n) {
            std::string joined = raw[k];
            for (std::size_t m = 1; m < n; ++m) joined += "_" + raw[k + m];
            if (find(joined)) {
                take = n;
                break;
            }
        }
        std::string tok = raw[k];
        for (std::size_t m = 1; m < take; ++m) tok += "_" + raw[k + m];
        out.push_back(std::move(tok));
        k += take;
    }
    return out;
}

std::string Dictionary::lemma(std::string_view token) const {
    auto it = lemma_.find(key(token));
    if (it != lemma_.end()) return it->second;
    if (all_digits(token)) return std::string(token);
    if (const WordEntry* e = find(token)) return e->word;
    return std::string(token);
}

std::string Dictionary::pred_form(std::string_view lemma) const {
    auto it = pred_.find(std::string(lemma));
    return it == pred_.end() ? std::string(lemma) : it->second;
}

std::optional<std::string> Dictionary::gender(std::string_view token) const {
    auto it = gender_.find(key(token));
    if (it == gender_.end()) return std::nullopt;
    return it->second;
}

const std::vector<std::vector<std::string>>& Dictionary::annotations(const std::string& name) const {
    static const std::vector<std::vector<std::string>> none;
    auto it = annotations_.find(name);
    return it == annotations_.end() ? none : it->second;
}

// ---- parsing ----

std::size_t Linkage::total_length() const {
    std::size_t n = 0;
    for (const auto& l : links) n += l.right - l.left;
    return n;
}

bool linkage_less(const Linkage& a, const Linkage& b) {
    if (a.links.size() != b.links.size()) return a.links.size() < b.links.size();
    if (a.total_length() != b.total_length()) return a.total_length() < b.total_length();
    for (std::size_t i = 0; i < a.links.size(); ++i)
        if (a.links[i].label != b.links[i].label) return a.links[i].label < b.links[i].label;
    return a.links < b.links;
}

namespace {

struct Item {
    std::size_t word;
    const Connector* conn;
};

class StackParser {
public:
    StackParser(std::vector<const std::vector<Disjunct>*> choices) : choices_(std::move(choices)) {}

    std::vector<std::pair<std::vector<Link>, std::vector<std::size_t>>> run() {
        walk(0);
        return std::move(found_);
    }

private:
    std::string state_key(std::size_t pos) const {
        std::string k = std::to_string(pos) + "|";
        for (const Item& it : stack_) k += std::to_string(it.word) + ":" + it.conn->label + ",";
        return k;
    }

    bool walk(std::size_t pos) {
        const std::size_t n = choices_.size();
        if (pos == n) {
            if (!stack_.empty()) return false;
            if (connected()) found_.emplace_back(links_, chosen_);
            return true;
        }
        std::string key = state_key(pos);
        if (dead_.count(key)) return false;
        bool any = false;
        const auto& ds = *choices_[pos];
        for (std::size_t di = 0; di < ds.size(); ++di) {
            const Disjunct& d = ds[di];
            if (d.left.size() > stack_.size()) continue;
            auto saved_stack = stack_;
            std::size_t saved_links = links_.size();
            bool ok = true;
            std::size_t last = n;
            for (const Connector& c : d.left) {
                const Item top = stack_.back();
                if (top.word == last || !labels_match(top.conn->label, c.label)) {
                    ok = false;
                    break;
                }
                links_.push_back({top.word, pos, link_label(top.conn->label, c.label)});
                stack_.pop_back();
                last = top.word;
            }
            if (ok) {
                for (auto it = d.right.rbegin(); it != d.right.rend(); ++it) stack_.push_back({pos, &*it});
                chosen_.push_back(di);
                if (walk(pos + 1)) any = true;
                chosen_.pop_back();
            }
            stack_ = std::move(saved_stack);
            links_.resize(saved_links);
        }
        if (!any) dead_.insert(std::move(key));
        return any;
    }

    bool connected() const {
        const std::size_t n = choices_.size();
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
            return parent[x] == x ? x : parent[x] = root(parent[x]);
        };
        for (const Link& l : links_) parent[root(l.left)] = root(l.right);
        for (std::size_t i = 1; i < n; ++i)
            if (root(i) != root(0)) return false;
        return true;
    }

    std::vector<const std::vector<Disjunct>*> choices_;
    std::vector<Item> stack_;
    std::vector<Link> links_;
    std::vector<std::size_t> chosen_;
    std::unordered_set<std::string> dead_;
    std::vector<std::pair<std::vector<Link>, std::vector<std::size_t>>> found_;
};

}  // namespace

ParseResult parse(const std::vector<std::string>& tokens, const Dictionary& dict, ParseOptions options) {
    Linkage base;
    std::vector<const std::vector<Disjunct>*> choices;
    if (options.walls && dict.has_wall()) {
        const WordEntry* wall = dict.find("LEFT-WALL");
        base.tokens.push_back("LEFT-WALL");
        base.words.push_back(wall->word);
        choices.push_back(&wall->disjuncts);
    }
    for (const auto& t : tokens) {
        const WordEntry* e = dict.lookup(t);
        if (!e) throw DomainError("unknown word '" + t + "'");
        base.tokens.push_back(t);
        base.words.push_back(e->word == "NUMBER" ? t : t + e->subscript);
        choices.push_back(&e->disjuncts);
    }
    ParseResult result;
    if (choices.empty()) return result;
    std::set<std::vector<Link>> seen;
    for (auto& [links, chosen] : StackParser(choices).run()) {
        std::sort(links.begin(), links.end());
        if (!seen.insert(links).second) continue;
        Linkage l = base;
        l.links = links;
        for (std::size_t i = 0; i < chosen.size(); ++i) l.disjuncts.push_back((*choices[i])[chosen[i]]);
        result.linkages.push_back(std::move(l));
    }
    std::sort(result.linkages.begin(), result.linkages.end(), linkage_less);
    return result;
}

bool links_planar(std::span<const std::pair<std::size_t, std::size_t>> links) {
    for (auto [a, b] : links) {
        if (a > b) std::swap(a, b);
        for (auto [c, d] : links) {
            if (c > d) std::swap(c, d);
            if (a < c && c < b && b < d) return false;
        }
    }
    return true;
}

MetaruleReport check_metarules(const Linkage& linkage) {
    MetaruleReport r;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& l : linkage.links) pairs.emplace_back(l.left, l.right);
    r.planar = links_planar(pairs);

    std::set<std::pair<std::size_t, std::size_t>> uniq;
    for (auto [a, b] : pairs)
        if (!uniq.insert({std::min(a, b), std::max(a, b)}).second) r.exclusion = false;

    const std::size_t n = linkage.tokens.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = root(parent[x]);
    };
    for (auto [a, b] : pairs)
        if (a < n && b < n) parent[root(a)] = root(b);
    for (std::size_t i = 1; i < n; ++i)
        if (root(i) != root(0)) r.connected = false;

    // Ordering: the chosen disjunct's connectors, nearest first, line up
    // with the word's links sorted by distance.
    if (linkage.disjuncts.size() == n) {
        for (std::size_t w = 0; w < n; ++w) {
            std::vector<const Link*> left, right;
            for (const auto& l : linkage.links) {
                if (l.right == w) left.push_back(&l);
                if (l.left == w) right.push_back(&l);
            }
            std::sort(left.begin(), left.end(), [](auto* a, auto* b) { return a->left > b->left; });
            std::sort(right.begin(), right.end(), [](auto* a, auto* b) { return a->right < b->right; });
            const Disjunct& d = linkage.disjuncts[w];
            if (left.size() != d.left.size() || right.size() != d.right.size()) {
                r.ordering = false;
                continue;
            }
            for (std::size_t k = 0; k < left.size(); ++k)
                if (!labels_match(left[k]->label, d.left[k].label)) r.ordering = false;
            for (std::size_t k = 0; k < right.size(); ++k)
                if (!labels_match(right[k]->label, d.right[k].label)) r.ordering = false;
            for (std::size_t k = 1; k < left.size(); ++k)
                if (left[k]->left == left[k - 1]->left) r.ordering = false;
            for (std::size_t k = 1; k < right.size(); ++k)
                if (right[k]->right == right[k - 1]->right) r.ordering = false;
        }
    }
    return r;
}

// ---- rendering ----

std::string render_arcs(const Linkage& linkage) {
    const auto& words = linkage.words;
    const std::size_t n = words.size();
    if (n == 0) return "\n";
    std::vector<std::size_t> start(n), anchor(n);
    std::size_t col = 0;
    for (std::size_t i = 0; i < n; ++i) {
        start[i] = col;
        col += words[i].size() + 1;
    }
    auto anchor_of = [&](std::size_t i) { return start[i] + (words[i].size() - 1) / 2; };
    // widen gaps until every label fits between its endpoints
    std::vector<Link> by_span = linkage.links;
    std::sort(by_span.begin(), by_span.end(),
              [](const Link& a, const Link& b) { return a.right - a.left < b.right - b.left; });
    for (const Link& l : by_span) {
        std::size_t need = l.label.size() + 4;
        std::size_t have = anchor_of(l.right) - anchor_of(l.left);
        if (have < need)
            for (std::size_t k = l.right; k < n; ++k) start[k] += need - have;
    }
    for (std::size_t i = 0; i < n; ++i) anchor[i] = anchor_of(i);
    std::size_t width = start[n - 1] + words[n - 1].size();

    std::vector<std::size_t> height(linkage.links.size(), 1);
    for (std::size_t a = 0; a < linkage.links.size(); ++a)
        for (std::size_t pass = 0; pass < linkage.links.size(); ++pass)
            for (std::size_t b = 0; b < linkage.links.size(); ++b) {
                const Link& la = linkage.links[a];
                const Link& lb = linkage.links[b];
                if (a == b) continue;
                bool inside = la.left <= lb.left && lb.right <= la.right;
                if (inside) height[a] = std::max(height[a], height[b] + 1);
            }
    std::size_t top = 0;
    for (auto h : height) top = std::max(top, h);

    std::vector<std::string> rows;
    for (std::size_t level = top; level >= 1; --level) {
        std::string row(width + 1, ' ');
        for (std::size_t k = 0; k < linkage.links.size(); ++k) {
            const Link& l = linkage.links[k];
            std::size_t a = anchor[l.left], b = anchor[l.right];
            if (height[k] > level) {
                row[a] = row[a] == ' ' ? '|' : row[a];
                row[b] = row[b] == ' ' ? '|' : row[b];
            } else if (height[k] == level) {
                for (std::size_t c = a; c <= b; ++c) row[c] = '-';
                row[a] = '+';
                row[b] = '+';
                std::size_t mid = a + (b - a + 1 - l.label.size()) / 2;
                row.replace(mid, l.label.size(), l.label);
            }
        }
        rows.push_back(row);
    }
    std::string bars(width + 1, ' ');
    for (const auto& l : linkage.links) {
        bars[anchor[l.left]] = '|';
        bars[anchor[l.right]] = '|';
    }
    rows.push_back(bars);
    std::string line(width + 1, ' ');
    for (std::size_t i = 0; i < n; ++i) line.replace(start[i], words[i].size(), words[i]);
    rows.push_back(line);

    std::string out;
    for (auto& r : rows) {
        r.erase(r.find_last_not_of(' ') + 1);
        out += r + "\n";
    }
    return out;
}

std::string render_links(const Linkage& linkage) {
    std::string out;
    for (const auto& l : linkage.links)
        out += "(" + std::to_string(l.left) + " " + std::to_string(l.right) + " " + l.label + ")\n";
    return out;
}

}  // namespace mg
