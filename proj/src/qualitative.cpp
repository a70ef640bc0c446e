#include "mg/qualitative.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <sstream>

#include "mg/error.hpp"

namespace mg {

namespace {

constexpr std::array<std::string_view, 8> kRccNames = {"DC", "EC", "PO", "EQ", "TPP", "NTPP", "TPPi", "NTPPi"};
constexpr std::array<std::string_view, 13> kAllenNames = {
    "before", "meets",       "overlaps",      "starts", "during", "finishes", "equal",
    "finished-by", "contains", "started-by", "overlapped-by", "met-by", "after"};
constexpr std::array<std::string_view, 13> kAllenShort = {"b",  "m",  "o",  "s",  "d",  "f", "eq",
                                                          "fi", "di", "si", "oi", "mi", "bi"};

// Rows r1, columns r2; bit k set when base relation k is possible for
// compose(r1, r2). Checked against the grid and interval oracles in tests.
constexpr std::uint16_t kRccCompose[8][8] = {
    {0x00ff, 0x0037, 0x0037, 0x0001, 0x0037, 0x0037, 0x0001, 0x0001},  // DC
    {0x00c7, 0x005f, 0x0037, 0x0002, 0x0036, 0x0034, 0x0003, 0x0001},  // EC
    {0x00c7, 0x00c7, 0x00ff, 0x0004, 0x0034, 0x0034, 0x00c7, 0x00c7},  // PO
    {0x0001, 0x0002, 0x0004, 0x0008, 0x0010, 0x0020, 0x0040, 0x0080},  // EQ
    {0x0001, 0x0003, 0x0037, 0x0010, 0x0030, 0x0020, 0x005f, 0x00c7},  // TPP
    {0x0001, 0x0001, 0x0037, 0x0020, 0x0020, 0x0020, 0x0037, 0x00ff},  // NTPP
    {0x00c7, 0x00c6, 0x00c4, 0x0040, 0x005c, 0x0034, 0x00c0, 0x0080},  // TPPi
    {0x00c7, 0x00c4, 0x00c4, 0x0080, 0x00c4, 0x00fc, 0x0080, 0x0080},  // NTPPi
};

constexpr std::uint16_t kAllenCompose[13][13] = {
    {0x0001, 0x0001, 0x0001, 0x0001, 0x001f, 0x001f, 0x0001, 0x0001, 0x0001, 0x0001, 0x001f, 0x001f, 0x1fff},  // b
    {0x0001, 0x0001, 0x0001, 0x0002, 0x001c, 0x001c, 0x0002, 0x0001, 0x0001, 0x0002, 0x001c, 0x00e0, 0x1f00},  // m
    {0x0001, 0x0001, 0x0007, 0x0004, 0x001c, 0x001c, 0x0004, 0x0007, 0x0187, 0x0184, 0x07fc, 0x0700, 0x1f00},  // o
    {0x0001, 0x0001, 0x0007, 0x0008, 0x0010, 0x0010, 0x0008, 0x0007, 0x0187, 0x0248, 0x0430, 0x0800, 0x1000},  // s
    {0x0001, 0x0001, 0x001f, 0x0010, 0x0010, 0x0010, 0x0010, 0x001f, 0x1fff, 0x1c30, 0x1c30, 0x1000, 0x1000},  // d
    {0x0001, 0x0002, 0x001c, 0x0010, 0x0010, 0x0020, 0x0020, 0x00e0, 0x1f00, 0x1c00, 0x1c00, 0x1000, 0x1000},  // f
    {0x0001, 0x0002, 0x0004, 0x0008, 0x0010, 0x0020, 0x0040, 0x0080, 0x0100, 0x0200, 0x0400, 0x0800, 0x1000},  // eq
    {0x0001, 0x0002, 0x0004, 0x0004, 0x001c, 0x00e0, 0x0080, 0x0080, 0x0100, 0x0100, 0x0700, 0x0700, 0x1f00},  // fi
    {0x0187, 0x0184, 0x0184, 0x0184, 0x07fc, 0x0700, 0x0100, 0x0100, 0x0100, 0x0100, 0x0700, 0x0700, 0x1f00},  // di
    {0x0187, 0x0184, 0x0184, 0x0248, 0x0430, 0x0400, 0x0200, 0x0100, 0x0100, 0x0200, 0x0400, 0x0800, 0x1000},  // si
    {0x0187, 0x0184, 0x07fc, 0x0430, 0x0430, 0x0400, 0x0400, 0x0700, 0x1f00, 0x1c00, 0x1c00, 0x1000, 0x1000},  // oi
    {0x0187, 0x0248, 0x0430, 0x0430, 0x0430, 0x0800, 0x0800, 0x0800, 0x1000, 0x1000, 0x1000, 0x1000, 0x1000},  // mi
    {0x1fff, 0x1c30, 0x1c30, 0x1c30, 0x1c30, 0x1000, 0x1000, 0x1000, 0x1000, 0x1000, 0x1000, 0x1000, 0x1000},  // bi
};

std::uint16_t full_bits(Algebra a) { return static_cast<std::uint16_t>((1U << base_count(a)) - 1); }

}  // namespace

std::string_view algebra_name(Algebra a) { return a == Algebra::Rcc8 ? "rcc8" : "allen"; }

std::optional<Algebra> parse_algebra(std::string_view name) {
    if (name == "rcc8" || name == "rcc") return Algebra::Rcc8;
    if (name == "allen") return Algebra::Allen;
    return std::nullopt;
}

int base_count(Algebra a) { return a == Algebra::Rcc8 ? 8 : 13; }

std::string_view base_name(Algebra a, int r) {
    if (r < 0 || r >= base_count(a)) throw Error("base relation index out of range");
    return a == Algebra::Rcc8 ? kRccNames[r] : kAllenNames[r];
}

std::optional<int> parse_base(Algebra a, std::string_view name) {
    for (int r = 0; r < base_count(a); ++r) {
        if (base_name(a, r) == name) return r;
        if (a == Algebra::Allen && kAllenShort[r] == name) return r;
    }
    return std::nullopt;
}

std::optional<Algebra> algebra_of_base(std::string_view name) {
    if (parse_base(Algebra::Rcc8, name)) return Algebra::Rcc8;
    if (parse_base(Algebra::Allen, name)) return Algebra::Allen;
    return std::nullopt;
}

int converse(Algebra a, int r) {
    if (r < 0 || r >= base_count(a)) throw Error("base relation index out of range");
    if (a == Algebra::Allen) return 12 - r;
    switch (static_cast<Rcc8>(r)) {
        case Rcc8::TPP: return static_cast<int>(Rcc8::TPPi);
        case Rcc8::NTPP: return static_cast<int>(Rcc8::NTPPi);
        case Rcc8::TPPi: return static_cast<int>(Rcc8::TPP);
        case Rcc8::NTPPi: return static_cast<int>(Rcc8::NTPP);
        default: return r;
    }
}

// ---- RelationSet ----

RelationSet::RelationSet(Algebra a, std::uint16_t bits) : algebra_(a), bits_(bits) {
    if (bits & ~full_bits(a)) throw Error("relation bits outside the algebra");
}
RelationSet::RelationSet(Rcc8 r) : algebra_(Algebra::Rcc8), bits_(static_cast<std::uint16_t>(1U << static_cast<int>(r))) {}
RelationSet::RelationSet(Allen r)
    : algebra_(Algebra::Allen), bits_(static_cast<std::uint16_t>(1U << static_cast<int>(r))) {}

RelationSet RelationSet::full(Algebra a) { return RelationSet(a, full_bits(a)); }

RelationSet RelationSet::single(Algebra a, int r) {
    if (r < 0 || r >= base_count(a)) throw Error("base relation index out of range");
    return RelationSet(a, static_cast<std::uint16_t>(1U << r));
}

RelationSet RelationSet::parse(Algebra a, std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text == "*") return full(a);
    if (!text.empty() && text.front() == '{') {
        if (text.back() != '}') throw Error("unterminated relation set '" + std::string(text) + "'");
        text = text.substr(1, text.size() - 2);
    }
    RelationSet out(a);
    while (!text.empty()) {
        auto comma = text.find(',');
        auto item = trim(text.substr(0, comma));
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        if (item.empty()) continue;
        auto r = parse_base(a, item);
        if (!r) throw Error("unknown " + std::string(algebra_name(a)) + " relation '" + std::string(item) + "'");
        out.bits_ |= static_cast<std::uint16_t>(1U << *r);
    }
    return out;
}

int RelationSet::size() const { return std::popcount(static_cast<unsigned>(bits_)); }

std::optional<int> RelationSet::singleton() const {
    if (size() != 1) return std::nullopt;
    return std::countr_zero(static_cast<unsigned>(bits_));
}

std::vector<int> RelationSet::members() const {
    std::vector<int> out;
    for (int r = 0; r < base_count(algebra_); ++r)
        if (contains(r)) out.push_back(r);
    return out;
}

RelationSet RelationSet::complement() const {
    return RelationSet(algebra_, static_cast<std::uint16_t>(~bits_ & full_bits(algebra_)));
}

RelationSet RelationSet::converse() const {
    RelationSet out(algebra_);
    for (int r : members()) out.bits_ |= static_cast<std::uint16_t>(1U << mg::converse(algebra_, r));
    return out;
}

void RelationSet::check_same(const RelationSet& o) const {
    if (algebra_ != o.algebra_) throw Error("relation sets from different algebras");
}

RelationSet RelationSet::operator&(const RelationSet& o) const {
    check_same(o);
    return RelationSet(algebra_, bits_ & o.bits_);
}

RelationSet RelationSet::operator|(const RelationSet& o) const {
    check_same(o);
    return RelationSet(algebra_, bits_ | o.bits_);
}

std::string RelationSet::to_string() const {
    std::string out = "{";
    bool first = true;
    for (int r : members()) {
        if (!first) out += ',';
        first = false;
        out += base_name(algebra_, r);
    }
    return out + "}";
}

RelationSet compose(Algebra a, int r1, int r2) {
    int n = base_count(a);
    if (r1 < 0 || r1 >= n || r2 < 0 || r2 >= n) throw Error("base relation index out of range");
    return RelationSet(a, a == Algebra::Rcc8 ? kRccCompose[r1][r2] : kAllenCompose[r1][r2]);
}

RelationSet compose_sets(const RelationSet& s1, const RelationSet& s2) {
    if (s1.algebra() != s2.algebra()) throw Error("cannot compose relations from different algebras");
    RelationSet out(s1.algebra());
    for (int a : s1.members())
        for (int b : s2.members()) out = out | compose(s1.algebra(), a, b);
    return out;
}

// ---- oracles ----

Allen allen_classify(IntInterval x, IntInterval y) {
    if (x.start >= x.end || y.start >= y.end) throw Error("degenerate interval");
    int a = x.start, b = x.end, c = y.start, d = y.end;
    if (b < c) return Allen::Before;
    if (b == c) return Allen::Meets;
    if (d < a) return Allen::After;
    if (d == a) return Allen::MetBy;
    if (a == c && b == d) return Allen::Equal;
    if (a == c) return b < d ? Allen::Starts : Allen::StartedBy;
    if (b == d) return a > c ? Allen::Finishes : Allen::FinishedBy;
    if (c < a && b < d) return Allen::During;
    if (a < c && d < b) return Allen::Contains;
    return a < c ? Allen::Overlaps : Allen::OverlappedBy;
}

GridRegion::GridRegion(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0 || width * height > 64) throw Error("grid box must hold 1..64 cells");
}

GridRegion::GridRegion(int width, int height, const std::vector<std::pair<int, int>>& cells)
    : GridRegion(width, height) {
    for (auto [x, y] : cells) {
        if (x < 0 || y < 0 || x >= width || y >= height) throw Error("grid cell outside the bounding box");
        mask_ |= std::uint64_t{1} << (y * width + x);
    }
    if (mask_ == 0) throw Error("empty region");
}

GridRegion GridRegion::from_mask(int width, int height, std::uint64_t mask) {
    GridRegion g(width, height);
    if (mask == 0) throw Error("empty region");
    if (mask & ~g.universe()) throw Error("grid cell outside the bounding box");
    g.mask_ = mask;
    return g;
}

bool GridRegion::contains(int x, int y) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return false;
    return (mask_ >> (y * width_ + x)) & 1U;
}

std::uint64_t GridRegion::universe() const {
    int n = width_ * height_;
    return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

std::uint64_t GridRegion::dilated() const {
    std::uint64_t out = 0;
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x) {
            if (!contains(x, y)) continue;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    int nx = x + dx, ny = y + dy;
                    if (nx >= 0 && ny >= 0 && nx < width_ && ny < height_) out |= std::uint64_t{1} << (ny * width_ + nx);
                }
        }
    return out;
}

namespace {

void same_box(const GridRegion& x, const GridRegion& y) {
    if (x.width() != y.width() || x.height() != y.height()) throw Error("regions live in different boxes");
}

}  // namespace

bool grid_connected(const GridRegion& x, const GridRegion& y) {
    same_box(x, y);
    return (x.dilated() & y.mask()) != 0;
}

Rcc8 rcc8_classify(const GridRegion& x, const GridRegion& y) {
    same_box(x, y);
    std::uint64_t a = x.mask(), b = y.mask();
    if ((a & b) == 0) return (x.dilated() & b) ? Rcc8::EC : Rcc8::DC;
    if (a == b) return Rcc8::EQ;
    if ((a & ~b) == 0) return (x.dilated() & ~b & x.universe()) ? Rcc8::TPP : Rcc8::NTPP;
    if ((b & ~a) == 0) return (y.dilated() & ~a & y.universe()) ? Rcc8::TPPi : Rcc8::NTPPi;
    return Rcc8::PO;
}

Rcc8 rcc8_classify_boxes(IntInterval xh, IntInterval xv, IntInterval yh, IntInterval yv) {
    Allen h = allen_classify(xh, yh);
    Allen v = allen_classify(xv, yv);
    auto apart = [](Allen r) { return r == Allen::Before || r == Allen::After; };
    auto touch = [](Allen r) { return r == Allen::Meets || r == Allen::MetBy; };
    if (apart(h) || apart(v)) return Rcc8::DC;
    if (touch(h) || touch(v)) return Rcc8::EC;
    if (h == Allen::Equal && v == Allen::Equal) return Rcc8::EQ;
    auto inside = [](Allen r) {
        return r == Allen::During || r == Allen::Starts || r == Allen::Finishes || r == Allen::Equal;
    };
    auto around = [](Allen r) {
        return r == Allen::Contains || r == Allen::StartedBy || r == Allen::FinishedBy || r == Allen::Equal;
    };
    auto edge = [](Allen r) { return r != Allen::During && r != Allen::Contains; };
    if (inside(h) && inside(v)) return edge(h) || edge(v) ? Rcc8::TPP : Rcc8::NTPP;
    if (around(h) && around(v)) return edge(h) || edge(v) ? Rcc8::TPPi : Rcc8::NTPPi;
    return Rcc8::PO;
}

// ---- GAO ----

std::string GaoRelation::to_string() const {
    std::string out(1, letter == GaoLetter::G ? 'G' : letter == GaoLetter::A ? 'A' : 'O');
    out += sign == GaoSign::Plus ? "+" : sign == GaoSign::Minus ? "-" : "/E";
    return out;
}

GaoRelation coarsen_to_gao(Allen r) {
    switch (r) {
        case Allen::Before: return {GaoLetter::G, GaoSign::Plus};
        case Allen::After: return {GaoLetter::G, GaoSign::Minus};
        case Allen::Meets: return {GaoLetter::A, GaoSign::Plus};
        case Allen::MetBy: return {GaoLetter::A, GaoSign::Minus};
        case Allen::Overlaps:
        case Allen::FinishedBy:
        case Allen::Contains: return {GaoLetter::O, GaoSign::Plus};
        case Allen::During:
        case Allen::Finishes:
        case Allen::OverlappedBy: return {GaoLetter::O, GaoSign::Minus};
        default: return {GaoLetter::O, GaoSign::Even};
    }
}

RelationSet gao_relations(GaoLetter letter, std::optional<GaoSign> sign) {
    RelationSet out(Algebra::Allen);
    for (int r = 0; r < 13; ++r) {
        auto g = coarsen_to_gao(static_cast<Allen>(r));
        if (g.letter == letter && (!sign || g.sign == *sign)) out = out | RelationSet::single(Algebra::Allen, r);
    }
    return out;
}

std::optional<GaoLetter> parse_gao_letter(char c) {
    switch (c) {
        case 'G': case 'g': return GaoLetter::G;
        case 'A': case 'a': return GaoLetter::A;
        case 'O': case 'o': return GaoLetter::O;
        default: return std::nullopt;
    }
}

std::optional<RelationSet> parse_gao(std::string_view text) {
    if (text.empty()) return std::nullopt;
    auto letter = parse_gao_letter(text[0]);
    if (!letter || (text[0] != 'G' && text[0] != 'A' && text[0] != 'O')) return std::nullopt;
    std::string_view rest = text.substr(1);
    if (rest.empty()) return gao_relations(*letter);
    if (rest == "+") return gao_relations(*letter, GaoSign::Plus);
    if (rest == "-") return gao_relations(*letter, GaoSign::Minus);
    if (rest == "/E" && *letter == GaoLetter::O) return gao_relations(*letter, GaoSign::Even);
    return std::nullopt;
}

// ---- ConstraintNetwork ----

std::optional<std::size_t> ConstraintNetwork::index_of(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

std::size_t ConstraintNetwork::add_variable(const std::string& name) {
    if (auto i = index_of(name)) return *i;
    auto full = full_bits(algebra_);
    for (auto& row : rel_) row.push_back(full);
    names_.push_back(name);
    rel_.emplace_back(names_.size(), full);
    std::size_t n = names_.size() - 1;
    int eq = algebra_ == Algebra::Rcc8 ? static_cast<int>(Rcc8::EQ) : static_cast<int>(Allen::Equal);
    rel_[n][n] = static_cast<std::uint16_t>(1U << eq);
    return n;
}

void ConstraintNetwork::set(std::size_t i, std::size_t j, const RelationSet& r) {
    if (r.algebra() != algebra_) throw Error("relation set from a different algebra");
    if (i >= size() || j >= size()) throw Error("network variable out of range");
    rel_[i][j] = r.bits();
    rel_[j][i] = r.converse().bits();
}

void ConstraintNetwork::constrain(std::size_t i, std::size_t j, const RelationSet& r) {
    set(i, j, relation(i, j) & r);
}

void ConstraintNetwork::constrain(const std::string& a, const std::string& b, const RelationSet& r) {
    std::size_t i = add_variable(a);
    std::size_t j = add_variable(b);
    constrain(i, j, r);
}

RelationSet ConstraintNetwork::relation(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) throw Error("network variable out of range");
    return RelationSet(algebra_, rel_[i][j]);
}

RelationSet ConstraintNetwork::relation(const std::string& a, const std::string& b) const {
    auto i = index_of(a), j = index_of(b);
    if (!i || !j) throw Error("unknown network variable");
    return relation(*i, *j);
}

bool ConstraintNetwork::has_empty() const {
    for (auto& row : rel_)
        for (auto bits : row)
            if (bits == 0) return true;
    return false;
}

std::string ConstraintNetwork::to_text() const {
    std::string out;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j) {
            RelationSet r = relation(i, j);
            if (r.is_full()) continue;
            out += names_[i] + " " + names_[j] + " " + r.to_string() + "\n";
        }
    return out;
}

ConstraintNetwork ConstraintNetwork::from_text(std::string_view text, std::optional<Algebra> algebra) {
    struct Line {
        std::string a, b, rel;
        int line;
    };
    std::vector<Line> lines;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        Line l{{}, {}, {}, lineno};
        if (!(ls >> l.a)) continue;
        if (l.a == "algebra") {
            std::string name;
            ls >> name;
            auto a = parse_algebra(name);
            if (!a) throw ParseError("unknown algebra '" + name + "'", lineno, 1);
            algebra = a;
            continue;
        }
        if (!(ls >> l.b)) throw ParseError("expected two variables and a relation set", lineno, 1);
        std::getline(ls, l.rel);
        if (l.rel.find_first_not_of(" \t") == std::string::npos)
            throw ParseError("missing relation set", lineno, 1);
        lines.push_back(std::move(l));
    }
    if (!algebra) {
        for (auto& l : lines) {
            auto open = l.rel.find_first_not_of(" \t{");
            auto close = l.rel.find_first_of(",} \t", open);
            if (open == std::string::npos) continue;
            algebra = algebra_of_base(l.rel.substr(open, close - open));
            if (algebra) break;
        }
    }
    ConstraintNetwork net(algebra.value_or(Algebra::Rcc8));
    for (auto& l : lines) {
        try {
            net.constrain(l.a, l.b, RelationSet::parse(net.algebra(), l.rel));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(e.what(), l.line, 1);
        }
    }
    return net;
}

bool operator==(const ConstraintNetwork& a, const ConstraintNetwork& b) {
    if (a.algebra_ != b.algebra_ || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto bi = b.index_of(a.names_[i]);
        if (!bi) return false;
        for (std::size_t j = 0; j < a.size(); ++j) {
            auto bj = b.index_of(a.names_[j]);
            if (a.rel_[i][j] != b.rel_[*bi][*bj]) return false;
        }
    }
    return true;
}

bool revise(ConstraintNetwork& net, std::size_t i, std::size_t k, std::size_t j) {
    RelationSet before = net.relation(i, j);
    RelationSet after = before & compose_sets(net.relation(i, k), net.relation(k, j));
    if (after == before) return false;
    net.set(i, j, after);
    return true;
}

std::optional<ConstraintNetwork> path_consistency(ConstraintNetwork net) {
    const std::size_t n = net.size();
    if (net.has_empty()) return std::nullopt;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == i || k == j) continue;
                    if (revise(net, i, k, j)) {
                        changed = true;
                        if (net.relation(i, j).empty()) return std::nullopt;
                    }
                }
            }
    }
    return net;
}

}  // namespace mg
