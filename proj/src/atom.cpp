#include "mg/atom.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <functional>
#include <set>

#include "mg/error.hpp"

namespace mg {

namespace {

constexpr std::array<std::string_view, 18> kKindNames = {
    "ConceptNode",
    "PredicateNode",
    "SpecificEntityNode",
    "NumberNode",
    "VariableNode",
    "InterpretationNode",
    "DefinedLinguisticConceptNode",
    "DefinedLinguisticPredicateNode",
    "EvaluationLink",
    "ListLink",
    "InheritanceLink",
    "ImplicationLink",
    "SatisfyingSetLink",
    "NotLink",
    "AndLink",
    "OrLink",
    "LambdaLink",
    "EquivalenceLink",
};

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void check_tv(const TruthValue& tv) {
    if (!(tv.strength >= 0.0 && tv.strength <= 1.0)) throw Error("truth value strength outside [0,1]");
    if (!(tv.count >= 0.0)) throw Error("truth value count is negative");
}

using NameFn = std::function<std::string(AtomId, const Atom&)>;

void render_tree(const AtomStore& store, std::string& out, AtomId id, bool with_tv, bool top, int indent,
                 int depth, const NameFn& name_of) {
    const Atom& a = store[id];
    if (indent >= 0) out.append(static_cast<std::size_t>(indent + depth * 2), ' ');
    out += '(';
    out += kind_name(a.kind);
    if (with_tv && (top || !a.tv.is_default())) {
        out += " (stv " + format_number(a.tv.strength) + " " + format_number(a.tv.count) + ")";
    }
    if (is_node(a.kind)) {
        out += ' ';
        out += quote(name_of ? name_of(id, a) : a.name);
        out += ')';
        return;
    }
    for (AtomId t : a.targets) {
        if (indent >= 0) {
            out += '\n';
        } else {
            out += ' ';
        }
        render_tree(store, out, t, with_tv, false, indent, depth + 1, name_of);
    }
    out += ')';
}

double number_of(const SExpr& e) {
    if (!e.is_symbol()) e.fail("expected a number");
    double v = 0;
    auto res = std::from_chars(e.text.data(), e.text.data() + e.text.size(), v);
    if (res.ec != std::errc() || res.ptr != e.text.data() + e.text.size()) e.fail("bad number '" + e.text + "'");
    return v;
}

AtomId read_atom(AtomStore& store, const SExpr& e) {
    if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol()) e.fail("expected an atom");
    auto kind = parse_kind(e.items[0].text);
    if (!kind) e.items[0].fail("unknown atom type '" + e.items[0].text + "'");
    std::size_t i = 1;
    std::optional<TruthValue> tv;
    if (i < e.items.size() && e.items[i].head() == "stv") {
        const SExpr& s = e.items[i];
        if (s.items.size() != 3) s.fail("stv takes strength and count");
        TruthValue t{number_of(s.items[1]), number_of(s.items[2])};
        if (t.strength < 0 || t.strength > 1 || t.count < 0) s.fail("truth value out of range");
        tv = t;
        ++i;
    }
    if (is_node(*kind)) {
        if (e.items.size() != i + 1 || e.items[i].is_list()) e.fail("node takes exactly one name");
        return store.intern(*kind, e.items[i].text, tv);
    }
    std::vector<AtomId> targets;
    for (; i < e.items.size(); ++i) targets.push_back(read_atom(store, e.items[i]));
    return store.intern(*kind, std::move(targets), tv);
}

std::set<std::string> rendered_set(const AtomStore& s, const NameFn& name_of = {}) {
    std::set<std::string> out;
    for (AtomId id = 0; id < s.size(); ++id) {
        std::string text;
        render_tree(s, text, id, true, true, -1, 0, name_of);
        out.insert(std::move(text));
    }
    return out;
}

// node id -> general node id, for every instance node in the store
std::map<AtomId, AtomId> instance_links(const AtomStore& store) {
    std::map<AtomId, AtomId> out;
    for (AtomId id = 0; id < store.size(); ++id) {
        const Atom& a = store[id];
        if ((a.kind != AtomKind::InheritanceLink && a.kind != AtomKind::ImplicationLink) || a.targets.size() != 2)
            continue;
        const Atom& inst = store[a.targets[0]];
        const Atom& gen = store[a.targets[1]];
        if (!is_node(inst.kind) || inst.kind != gen.kind) continue;
        if (split_instance(inst.name)) out.emplace(a.targets[0], a.targets[1]);
    }
    return out;
}

bool generalizable(const AtomStore& store, AtomId id) {
    const Atom& a = store[id];
    if (a.kind == AtomKind::EvaluationLink || a.kind == AtomKind::NotLink) return true;
    return a.kind == AtomKind::InheritanceLink && !a.targets.empty() &&
           store[a.targets[0]].kind == AtomKind::SatisfyingSetLink;
}

bool contains_any(const AtomStore& store, AtomId id, const std::map<AtomId, AtomId>& inst) {
    if (inst.count(id)) return true;
    for (AtomId t : store[id].targets)
        if (contains_any(store, t, inst)) return true;
    return false;
}

}  // namespace

bool is_node(AtomKind kind) { return kind < AtomKind::EvaluationLink; }

std::string_view kind_name(AtomKind kind) { return kKindNames.at(static_cast<std::size_t>(kind)); }

std::optional<AtomKind> parse_kind(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == name) return static_cast<AtomKind>(i);
    return std::nullopt;
}

std::optional<std::pair<std::string, std::string>> split_instance(std::string_view name) {
    auto at = name.rfind('@');
    if (at == std::string_view::npos || at == 0 || at + 1 == name.size()) return std::nullopt;
    return std::make_pair(std::string(name.substr(0, at)), std::string(name.substr(at + 1)));
}

AtomId AtomStore::add(AtomKind kind, std::string name, std::vector<AtomId> targets, std::optional<TruthValue> tv) {
    if (tv) check_tv(*tv);
    for (AtomId t : targets)
        if (t >= atoms_.size()) throw Error("link target does not exist");
    Key key{kind, name, targets};
    if (auto it = index_.find(key); it != index_.end()) {
        if (tv && tv->count > atoms_[it->second].tv.count) atoms_[it->second].tv = *tv;
        return it->second;
    }
    auto id = static_cast<AtomId>(atoms_.size());
    if (is_node(kind)) note_instance(name);
    atoms_.push_back(Atom{kind, std::move(name), std::move(targets), tv.value_or(TruthValue{})});
    index_.emplace(std::move(key), id);
    return id;
}

AtomId AtomStore::intern(AtomKind kind, std::string_view name, std::optional<TruthValue> tv) {
    if (!is_node(kind)) throw Error(std::string(kind_name(kind)) + " is not a node type");
    return add(kind, std::string(name), {}, tv);
}

AtomId AtomStore::intern(AtomKind kind, std::vector<AtomId> targets, std::optional<TruthValue> tv) {
    if (is_node(kind)) throw Error(std::string(kind_name(kind)) + " is not a link type");
    return add(kind, {}, std::move(targets), tv);
}

std::optional<AtomId> AtomStore::find(AtomKind kind, std::string_view name) const {
    auto it = index_.find(Key{kind, std::string(name), {}});
    if (it == index_.end() || !is_node(kind)) return std::nullopt;
    return it->second;
}

std::optional<AtomId> AtomStore::find(AtomKind kind, const std::vector<AtomId>& targets) const {
    auto it = index_.find(Key{kind, {}, targets});
    if (it == index_.end() || is_node(kind)) return std::nullopt;
    return it->second;
}

void AtomStore::set_tv(AtomId id, TruthValue tv) {
    check_tv(tv);
    atoms_.at(id).tv = tv;
}

void AtomStore::note_instance(std::string_view name) {
    auto parts = split_instance(name);
    if (!parts) return;
    int k = 0;
    auto res = std::from_chars(parts->second.data(), parts->second.data() + parts->second.size(), k);
    if (res.ec != std::errc() || res.ptr != parts->second.data() + parts->second.size()) return;
    int& c = counters_[parts->first];
    c = std::max(c, k);
}

std::string AtomStore::next_instance_name(std::string_view base) {
    int& c = counters_[std::string(base)];
    return std::string(base) + "@" + std::to_string(++c);
}

AtomId AtomStore::fresh_instance(std::string_view base, AtomKind kind) {
    return intern(kind, next_instance_name(base));
}

std::vector<AtomId> AtomStore::roots() const {
    std::vector<bool> used(atoms_.size(), false);
    for (const Atom& a : atoms_)
        for (AtomId t : a.targets) used[t] = true;
    std::vector<AtomId> out;
    for (AtomId id = 0; id < atoms_.size(); ++id)
        if (!used[id]) out.push_back(id);
    return out;
}

bool AtomStore::mentions(AtomId root, AtomId atom) const {
    if (root == atom) return true;
    for (AtomId t : atoms_.at(root).targets)
        if (mentions(t, atom)) return true;
    return false;
}

AtomId AtomStore::import(const AtomStore& other, AtomId id) {
    const Atom& a = other[id];
    if (is_node(a.kind)) return add(a.kind, a.name, {}, a.tv);
    std::vector<AtomId> targets;
    for (AtomId t : a.targets) targets.push_back(import(other, t));
    return add(a.kind, {}, std::move(targets), a.tv);
}

std::string AtomStore::render(AtomId id, bool with_tv, int indent) const {
    std::string out;
    render_tree(*this, out, id, with_tv, true, indent, 0, {});
    return out;
}

std::string AtomStore::to_text() const {
    std::vector<std::string> lines;
    for (AtomId id : roots()) lines.push_back(render(id));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

AtomStore AtomStore::from_text(std::string_view text) {
    AtomStore store;
    for (const SExpr& e : parse_sexprs(text)) read_atom(store, e);
    return store;
}

bool operator==(const AtomStore& a, const AtomStore& b) {
    if (a.size() != b.size()) return false;
    return rendered_set(a) == rendered_set(b);
}

bool equal_up_to_renaming(const AtomStore& a, const AtomStore& b) {
    if (a.size() != b.size()) return false;
    auto instances = [](const AtomStore& s) {
        std::map<std::string, std::set<std::string>> by_base;
        for (AtomId id = 0; id < s.size(); ++id) {
            if (!is_node(s[id].kind)) continue;
            if (auto p = split_instance(s[id].name)) by_base[p->first].insert(p->second);
        }
        return by_base;
    };
    auto ia = instances(a);
    auto ib = instances(b);
    if (ia.size() != ib.size()) return false;
    std::vector<std::string> bases;
    for (auto& [base, suffixes] : ia) {
        auto it = ib.find(base);
        if (it == ib.end() || it->second.size() != suffixes.size()) return false;
        bases.push_back(base);
    }
    const auto target = rendered_set(a);
    std::map<std::string, std::string> rename;  // full name in b -> full name in a
    long budget = 200000;

    std::function<bool(std::size_t)> search = [&](std::size_t bi) -> bool {
        if (bi == bases.size()) {
            NameFn name_of = [&](AtomId, const Atom& atom) {
                auto it = rename.find(atom.name);
                return it == rename.end() ? atom.name : it->second;
            };
            return rendered_set(b, name_of) == target;
        }
        const std::string& base = bases[bi];
        std::vector<std::string> from(ib[base].begin(), ib[base].end());
        std::vector<std::string> to(ia[base].begin(), ia[base].end());
        do {
            if (--budget < 0) return false;
            for (std::size_t i = 0; i < from.size(); ++i) rename[base + "@" + from[i]] = base + "@" + to[i];
            if (search(bi + 1)) return true;
        } while (std::next_permutation(to.begin(), to.end()));
        return false;
    };
    return search(0);
}

std::vector<AtomId> normalize_instances(AtomStore& store) {
    auto inst = instance_links(store);
    std::map<AtomId, AtomId> general;
    for (auto [i, g] : inst) {
        const Atom& a = store[i];
        general[i] = store.intern(a.kind, split_instance(a.name)->first);
    }
    std::map<AtomId, AtomId> memo;
    std::function<AtomId(AtomId)> gen = [&](AtomId id) -> AtomId {
        if (auto it = general.find(id); it != general.end()) return it->second;
        if (auto it = memo.find(id); it != memo.end()) return it->second;
        const Atom a = store[id];
        AtomId out = id;
        if (!is_node(a.kind)) {
            std::vector<AtomId> targets;
            for (AtomId t : a.targets) targets.push_back(gen(t));
            out = store.intern(a.kind, std::move(targets), a.tv);
        }
        memo[id] = out;
        return out;
    };
    std::vector<AtomId> out;
    const auto n = static_cast<AtomId>(store.size());
    for (AtomId id = 0; id < n; ++id) {
        if (!generalizable(store, id) || !contains_any(store, id, inst)) continue;
        AtomId g = gen(id);
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    }
    return out;
}

std::string generalized_text(const AtomStore& store, AtomId id) {
    auto inst = instance_links(store);
    NameFn name_of = [&](AtomId node, const Atom& atom) {
        if (inst.count(node)) return split_instance(atom.name)->first;
        return atom.name;
    };
    std::string out;
    render_tree(store, out, id, false, true, -1, 0, name_of);
    return out;
}

// ---- patterns ----

namespace {

PatternNode read_pattern(const SExpr& e, std::vector<std::string>& vars) {
    PatternNode p;
    auto note = [&](const std::string& v) {
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    };
    if (e.is_symbol() && !e.text.empty() && e.text[0] == '$') {
        p.kind = AtomKind::VariableNode;
        p.name = e.text;
        note(p.name);
        return p;
    }
    if (!e.is_list() || e.items.empty() || !e.items[0].is_symbol()) e.fail("expected an atom pattern");
    auto kind = parse_kind(e.items[0].text);
    if (!kind) e.items[0].fail("unknown atom type '" + e.items[0].text + "'");
    p.kind = *kind;
    std::size_t i = 1;
    if (i < e.items.size() && e.items[i].head() == "stv") ++i;
    if (is_node(p.kind)) {
        if (e.items.size() != i + 1 || e.items[i].is_list()) e.fail("node takes exactly one name");
        p.name = e.items[i].text;
        if (p.is_variable()) note(p.name);
        return p;
    }
    for (; i < e.items.size(); ++i) p.children.push_back(read_pattern(e.items[i], vars));
    return p;
}

std::string binding_key(const Binding& b, const AtomStore& store) {
    std::string key;
    for (auto& [v, id] : b) {
        key += v;
        key += '=';
        key += store.render(id, false);
        key += '\n';
    }
    return key;
}

void sort_bindings(std::vector<Binding>& bs, const AtomStore& store) {
    std::vector<std::pair<std::string, Binding>> keyed;
    for (auto& b : bs) keyed.emplace_back(binding_key(b, store), std::move(b));
    std::sort(keyed.begin(), keyed.end(), [](auto& x, auto& y) { return x.first < y.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(), [](auto& x, auto& y) { return x.first == y.first; }),
                keyed.end());
    bs.clear();
    for (auto& k : keyed) bs.push_back(std::move(k.second));
}

}  // namespace

AtomPattern AtomPattern::from_sexpr(const SExpr& e) {
    AtomPattern p;
    p.root = read_pattern(e, p.variables);
    return p;
}

AtomPattern AtomPattern::parse(std::string_view text) {
    auto es = parse_sexprs(text);
    if (es.size() != 1) throw ParseError("expected exactly one pattern", 1, 1);
    return from_sexpr(es[0]);
}

bool unify(const PatternNode& p, const AtomStore& store, AtomId id, Binding& binding) {
    if (p.is_variable()) {
        auto [it, fresh] = binding.emplace(p.name, id);
        return fresh || it->second == id;
    }
    const Atom& a = store[id];
    if (a.kind != p.kind) return false;
    if (is_node(a.kind)) return a.name == p.name;
    if (a.targets.size() != p.children.size()) return false;
    for (std::size_t i = 0; i < p.children.size(); ++i)
        if (!unify(p.children[i], store, a.targets[i], binding)) return false;
    return true;
}

std::vector<Binding> match(const AtomPattern& pattern, const AtomStore& store, const Binding& seed) {
    std::vector<Binding> out;
    for (AtomId id = 0; id < store.size(); ++id) {
        if (!pattern.root.is_variable() && store[id].kind != pattern.root.kind) continue;
        Binding b = seed;
        if (unify(pattern.root, store, id, b)) out.push_back(std::move(b));
    }
    sort_bindings(out, store);
    return out;
}

std::vector<Binding> match_all(std::span<const AtomPattern> patterns, const AtomStore& store) {
    std::vector<Binding> current{Binding{}};
    for (const AtomPattern& p : patterns) {
        std::vector<Binding> next;
        for (const Binding& b : current) {
            auto more = match(p, store, b);
            next.insert(next.end(), more.begin(), more.end());
        }
        current = std::move(next);
        if (current.empty()) break;
    }
    sort_bindings(current, store);
    return current;
}

AtomId substitute(const PatternNode& p, const Binding& binding, AtomStore& store) {
    if (p.is_variable()) {
        auto it = binding.find(p.name);
        if (it == binding.end()) throw Error("unbound variable " + p.name);
        return it->second;
    }
    if (is_node(p.kind)) return store.intern(p.kind, p.name);
    std::vector<AtomId> targets;
    for (const PatternNode& c : p.children) targets.push_back(substitute(c, binding, store));
    return store.intern(p.kind, std::move(targets));
}

AtomId substitute(const AtomPattern& pattern, const Binding& binding, AtomStore& store) {
    return substitute(pattern.root, binding, store);
}

}  // namespace mg
