#include "mg/grounding.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include "mg/error.hpp"
#include "mg/sexpr.hpp"

#ifndef MG_DATA_DIR
#define MG_DATA_DIR "data"
#endif

namespace mg {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot read " + p.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Text of a bundle file with each `#include PATH` line replaced by the
// named file, relative to the including file.
std::string read_bundle_file(const fs::path& p, int depth = 0) {
    if (depth > 8) throw Error("include nesting too deep at " + p.string());
    std::istringstream in(read_file(p));
    std::string out, line;
    while (std::getline(in, line)) {
        if (line.starts_with("#include ")) {
            std::string target = line.substr(9);
            while (!target.empty() && (target.back() == ';' || std::isspace(static_cast<unsigned char>(target.back()))))
                target.pop_back();
            out += read_bundle_file(p.parent_path() / target, depth + 1);
        } else {
            out += line + "\n";
        }
    }
    return out;
}

double number_of(const SExpr& e) {
    if (!e.is_symbol()) e.fail("expected a number");
    try {
        std::size_t used = 0;
        double v = std::stod(e.text, &used);
        if (used != e.text.size()) e.fail("expected a number");
        return v;
    } catch (const std::logic_error&) {
        e.fail("expected a number");
    }
}

RelationSet parse_relation(Algebra a, const SExpr& e) {
    std::string text;
    if (e.is_list()) {
        for (const SExpr& item : e.items) {
            if (!item.is_symbol()) item.fail("expected a relation name");
            text += (text.empty() ? "" : ",") + item.text;
        }
        text = "{" + text + "}";
    } else {
        text = e.text;
    }
    if (a == Algebra::Allen)
        if (auto g = parse_gao(text)) return *g;
    try {
        return RelationSet::parse(a, text);
    } catch (const Error& err) {
        e.fail(err.what());
    }
}

// Instance node id -> its generalization target, from Inh/Impl scaffolding.
std::map<AtomId, AtomId> instance_nodes(const AtomStore& store) {
    std::map<AtomId, AtomId> out;
    for (AtomId id = 0; id < store.size(); ++id) {
        const Atom& a = store[id];
        if ((a.kind != AtomKind::InheritanceLink && a.kind != AtomKind::ImplicationLink) || a.targets.size() != 2)
            continue;
        const Atom& inst = store[a.targets[0]];
        const Atom& gen = store[a.targets[1]];
        if (is_node(inst.kind) && inst.kind == gen.kind && split_instance(inst.name)) out.emplace(a.targets[0], a.targets[1]);
    }
    return out;
}

void collect_nodes(const AtomStore& store, AtomId id, std::set<AtomId>& out) {
    if (is_node(store[id].kind)) {
        out.insert(id);
        return;
    }
    for (AtomId t : store[id].targets) collect_nodes(store, t, out);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

std::string_view side_name(Side s) {
    switch (s) {
        case Side::Language: return "language";
        case Side::Perception: return "perception";
        case Side::Action: return "action";
    }
    return "?";
}

Algebra frame_algebra(std::string_view frame) {
    if (frame == "rcc8") return Algebra::Rcc8;
    if (frame == "allen:h" || frame == "allen:v" || frame == "allen:t") return Algebra::Allen;
    throw Error("unknown frame '" + std::string(frame) + "'");
}

// ---- bundles ----

std::vector<GroundingRule> Bundle::parse_grounding(std::string_view text, std::map<std::string, double>* qualifiers) {
    std::vector<GroundingRule> out;
    for (const SExpr& e : parse_sexprs(text)) {
        if (e.head() == "qualifier") {
            if (e.items.size() != 3 || !e.items[1].is_symbol()) e.fail("expected (qualifier WORD STRENGTH)");
            double v = number_of(e.items[2]);
            if (v < 0 || v > 1) e.items[2].fail("strength outside [0,1]");
            if (qualifiers) (*qualifiers)[e.items[1].text] = v;
            continue;
        }
        if (e.head() != "ground") e.fail("expected (ground ...) or (qualifier ...)");
        if (e.items.size() < 2 || !e.items[1].is_symbol()) e.fail("grounding rule needs a name");
        GroundingRule r;
        r.name = e.items[1].text;
        bool have_side = false, have_frame = false, have_relation = false;
        const SExpr* relation = nullptr;
        for (std::size_t i = 2; i < e.items.size(); ++i) {
            const SExpr& f = e.items[i];
            const auto h = f.head();
            if (h == "side" && f.items.size() == 2) {
                const std::string& s = f.items[1].text;
                if (s == "language") r.side = Side::Language;
                else if (s == "perception") r.side = Side::Perception;
                else if (s == "action") r.side = Side::Action;
                else f.items[1].fail("unknown side '" + s + "'");
                have_side = true;
            } else if (h == "frame" && f.items.size() == 2) {
                r.frame = f.items[1].text;
                try {
                    frame_algebra(r.frame);
                } catch (const Error& err) {
                    f.items[1].fail(err.what());
                }
                have_frame = true;
            } else if (h == "relation" && f.items.size() == 2) {
                relation = &f.items[1];
                have_relation = true;
            } else if (h == "stv" && f.items.size() == 3) {
                r.tv = {number_of(f.items[1]), number_of(f.items[2])};
                if (r.tv.strength < 0 || r.tv.strength > 1 || r.tv.count < 0) f.fail("truth value out of range");
            } else if (h == "phrase" && f.items.size() == 2 && f.items[1].is_string()) {
                r.phrase = f.items[1].text;
            } else if (h == "logic" && f.items.size() >= 2) {
                for (std::size_t k = 1; k < f.items.size(); ++k) r.logic.push_back(AtomPattern::from_sexpr(f.items[k]));
            } else {
                f.fail("unexpected field in grounding rule '" + r.name + "'");
            }
        }
        if (!have_side || !have_frame || !have_relation || r.logic.empty())
            e.fail("grounding rule '" + r.name + "' needs side, frame, relation and logic");
        r.relation = parse_relation(frame_algebra(r.frame), *relation);
        if (r.relation.empty()) relation->fail("empty relation");
        std::set<std::string> vars;
        for (const auto& p : r.logic) vars.insert(p.variables.begin(), p.variables.end());
        if (vars != std::set<std::string>{"$x", "$y"})
            e.fail("grounding rule '" + r.name + "' must use exactly the variables $x and $y");
        out.push_back(std::move(r));
    }
    return out;
}

Bundle Bundle::load(const fs::path& dir) {
    Bundle b;
    b.name = dir.filename().string();
    if (b.name.empty()) b.name = dir.parent_path().filename().string();
    auto wrap = [&](const fs::path& p, auto&& fn) {
        try {
            fn(read_bundle_file(p));
        } catch (const ParseError& e) {
            throw Error(p.string() + ": " + e.what());
        }
    };
    wrap(dir / "dictionary.dict", [&](const std::string& t) { b.dict = Dictionary::load(t); });
    wrap(dir / "mapping.rules", [&](const std::string& t) { b.rules = RuleBase::load(t); });
    if (fs::exists(dir / "grounding.rules"))
        wrap(dir / "grounding.rules", [&](const std::string& t) { b.grounding = parse_grounding(t, &b.qualifiers); });
    return b;
}

fs::path data_root(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv("MG_DATA"); env && *env) return env;
    return MG_DATA_DIR;
}

fs::path resolve_bundle(const std::string& name_or_path, const fs::path& root) {
    fs::path p(name_or_path);
    if (fs::is_directory(p) && fs::exists(p / "dictionary.dict")) return p;
    fs::path named = root / "bundles" / name_or_path;
    if (fs::is_directory(named)) return named;
    throw Error("no bundle '" + name_or_path + "' (looked in " + (root / "bundles").string() + ")");
}

// ---- comprehension ----

Comprehension comprehend(const std::vector<std::string>& tokens, const Bundle& bundle, AtomStore& store) {
    ParseResult parsed = parse(tokens, bundle.dict);
    if (parsed.linkages.empty()) {
        std::string s;
        for (const auto& t : tokens) s += (s.empty() ? "" : " ") + t;
        throw DomainError("no parse for '" + s + "'");
    }
    Comprehension c;
    c.alternatives = parsed.linkages.size();
    c.linkage = std::move(parsed.linkages.front());
    c.dep = extract(c.linkage, bundle.dict);
    c.applied = apply(bundle.rules, c.dep, bundle.dict, store);
    c.generalized = normalize_instances(store);
    return c;
}

Comprehension comprehend(std::string_view sentence, const Bundle& bundle, AtomStore& store) {
    return comprehend(bundle.dict.tokenize(sentence), bundle, store);
}

// ---- grounding ----

std::string GroundFact::to_string() const { return frame + " " + x + " " + y + " " + relation.to_string(); }

std::map<std::string, ConstraintNetwork> GroundResult::networks() const {
    std::map<std::string, ConstraintNetwork> out;
    for (const auto& f : facts) {
        auto it = out.find(f.frame);
        if (it == out.end()) it = out.emplace(f.frame, ConstraintNetwork(frame_algebra(f.frame))).first;
        it->second.constrain(f.x, f.y, f.relation);
    }
    return out;
}

ConstraintNetwork GroundResult::network(const std::string& frame) const {
    auto all = networks();
    auto it = all.find(frame);
    return it == all.end() ? ConstraintNetwork(frame_algebra(frame)) : it->second;
}

bool is_scaffolding(const AtomStore& store, AtomId id) {
    const Atom& a = store[id];
    if (is_node(a.kind) || a.targets.empty()) return true;
    if (a.kind == AtomKind::InheritanceLink || a.kind == AtomKind::ImplicationLink)
        return is_node(store[a.targets[0]].kind);
    if (a.kind == AtomKind::EvaluationLink) return store[a.targets[0]].kind == AtomKind::DefinedLinguisticPredicateNode;
    return false;
}

std::vector<std::vector<AtomId>> atom_groups(const AtomStore& store) {
    const auto inst = instance_nodes(store);
    std::vector<AtomId> content, scaffolding;
    std::set<std::string> derived;  // generalizations of instance-bearing roots
    for (AtomId r : store.roots()) {
        if (is_scaffolding(store, r)) {
            scaffolding.push_back(r);
            continue;
        }
        content.push_back(r);
    }
    std::map<AtomId, std::set<AtomId>> nodes_of;
    for (AtomId r : content) {
        std::set<AtomId> nodes;
        collect_nodes(store, r, nodes);
        std::set<AtomId> mine;
        for (AtomId n : nodes)
            if (inst.count(n)) mine.insert(n);
        nodes_of[r] = mine;
        if (!mine.empty()) derived.insert(generalized_text(store, r));
    }
    // union content roots sharing a predicate instance
    std::vector<std::size_t> parent(content.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::map<AtomId, std::size_t> owner;
    for (std::size_t i = 0; i < content.size(); ++i)
        for (AtomId n : nodes_of[content[i]]) {
            if (store[n].kind != AtomKind::PredicateNode) continue;
            auto [it, fresh] = owner.emplace(n, i);
            if (!fresh) parent[find(i)] = find(it->second);
        }
    std::map<std::size_t, std::vector<AtomId>> by_root;
    std::vector<AtomId> general;
    for (std::size_t i = 0; i < content.size(); ++i) {
        AtomId r = content[i];
        if (nodes_of[r].empty()) {
            if (!derived.count(store.render(r, false))) general.push_back(r);
            continue;
        }
        by_root[find(i)].push_back(r);
    }
    std::vector<std::vector<AtomId>> out;
    for (auto& [root, members] : by_root) {
        std::set<AtomId> insts;
        for (AtomId r : members) insts.insert(nodes_of[r].begin(), nodes_of[r].end());
        std::vector<AtomId> group = members;
        for (AtomId s : scaffolding) {
            std::set<AtomId> nodes;
            collect_nodes(store, s, nodes);
            if (std::any_of(nodes.begin(), nodes.end(), [&](AtomId n) { return insts.count(n) > 0; })) group.push_back(s);
        }
        out.push_back(std::move(group));
    }
    if (!general.empty()) out.push_back(std::move(general));
    return out;
}

namespace {

struct GroupView {
    AtomStore sub;
    std::vector<std::string> asserted;  // generalized texts of the content roots, sorted
    std::set<std::string> asserted_set;
};

GroupView make_view(const AtomStore& store, const std::vector<AtomId>& group) {
    GroupView v;
    std::vector<AtomId> imported;
    for (AtomId id : group) imported.push_back(v.sub.import(store, id));
    for (AtomId id : imported)
        if (!is_scaffolding(v.sub, id)) v.asserted_set.insert(generalized_text(v.sub, id));
    v.asserted.assign(v.asserted_set.begin(), v.asserted_set.end());
    normalize_instances(v.sub);
    return v;
}

std::string node_name(const AtomStore& store, AtomId id) {
    const Atom& a = store[id];
    return is_node(a.kind) ? a.name : store.render(id, false);
}

}  // namespace

GroundResult ground(const AtomStore& store, const Bundle& bundle, Side side) {
    GroundResult result;
    std::set<std::tuple<std::string, std::string, std::string, std::uint16_t>> seen;
    for (const auto& group : atom_groups(store)) {
        GroupView v = make_view(store, group);
        std::set<std::string> used;
        std::optional<double> strength;
        for (AtomId id = 0; id < v.sub.size(); ++id) {
            const Atom& a = v.sub[id];
            if (a.kind != AtomKind::InheritanceLink || a.targets.size() != 2) continue;
            if (v.sub[a.targets[0]].kind != AtomKind::SatisfyingSetLink) continue;
            const Atom& q = v.sub[a.targets[1]];
            auto it = bundle.qualifiers.find(q.name);
            std::string text = v.sub.render(id, false);
            if (it != bundle.qualifiers.end() && v.asserted_set.count(text)) {
                strength = it->second;
                used.insert(text);
            }
        }
        for (const GroundingRule& rule : bundle.grounding) {
            if (rule.side != side) continue;
            for (bool negated : {false, true}) {
                std::vector<AtomPattern> pats = rule.logic;
                if (negated) {
                    PatternNode n;
                    n.kind = AtomKind::NotLink;
                    n.children.push_back(pats[0].root);
                    pats[0].root = std::move(n);
                }
                for (const Binding& b : match_all(pats, v.sub)) {
                    std::vector<std::string> texts;
                    AtomStore scratch = v.sub;
                    bool ok = true;
                    for (const auto& p : pats) {
                        std::string t = scratch.render(substitute(p, b, scratch), false);
                        if (!v.asserted_set.count(t)) ok = false;
                        texts.push_back(std::move(t));
                    }
                    if (!ok) continue;
                    used.insert(texts.begin(), texts.end());
                    GroundFact f;
                    f.frame = rule.frame;
                    f.relation = negated ? rule.relation.complement() : rule.relation;
                    f.x = node_name(v.sub, b.at("$x"));
                    f.y = node_name(v.sub, b.at("$y"));
                    f.tv = rule.tv;
                    if (strength) f.tv.strength = *strength;
                    f.rule = negated ? "not " + rule.name : rule.name;
                    auto key = std::make_tuple(f.frame, f.x, f.y, f.relation.bits());
                    auto conv = std::make_tuple(f.frame, f.y, f.x, f.relation.converse().bits());
                    if (seen.count(key) || seen.count(conv)) continue;
                    seen.insert(key);
                    result.facts.push_back(std::move(f));
                }
            }
        }
        for (const auto& t : v.asserted)
            if (!used.count(t)) result.unmatched.push_back(t);
    }
    return result;
}

// ---- expression ----

void express(const std::vector<GroundFact>& facts, const Bundle& bundle, AtomStore& store) {
    for (const GroundFact& f : facts) {
        const GroundingRule* rule = nullptr;
        bool negated = false;
        for (const auto& r : bundle.grounding)
            if (r.side == Side::Language && r.frame == f.frame && r.relation == f.relation) {
                rule = &r;
                break;
            }
        if (!rule)
            for (const auto& r : bundle.grounding)
                if (r.side == Side::Language && r.frame == f.frame && r.relation == f.relation.complement()) {
                    rule = &r;
                    negated = true;
                    break;
                }
        if (!rule) throw DomainError("unexpressible relation " + f.to_string() + " in bundle " + bundle.name);

        AtomStore scratch;
        // placeholders keep the two arguments apart even when their names agree
        const AtomId px = scratch.intern(AtomKind::ConceptNode, "\x1f$x");
        const AtomId py = scratch.intern(AtomKind::ConceptNode, "\x1f$y");
        Binding b{{"$x", px}, {"$y", py}};
        std::vector<AtomId> made;
        for (std::size_t i = 0; i < rule->logic.size(); ++i) {
            AtomId id = substitute(rule->logic[i], b, scratch);
            if (i == 0 && negated) id = scratch.intern(AtomKind::NotLink, std::vector<AtomId>{id});
            made.push_back(id);
        }
        // a strength declared by a qualifier word is said with that word
        for (const auto& [word, strength] : bundle.qualifiers) {
            if (strength != f.tv.strength) continue;
            AtomId head = made[0];
            if (scratch[head].kind == AtomKind::NotLink) head = scratch[head].targets[0];
            const Atom& eval = scratch[head];
            if (eval.kind != AtomKind::EvaluationLink || eval.targets.empty()) break;
            AtomId set = scratch.intern(AtomKind::SatisfyingSetLink, std::vector<AtomId>{eval.targets[0]});
            made.push_back(scratch.intern(AtomKind::InheritanceLink,
                                          std::vector<AtomId>{set, scratch.intern(AtomKind::ConceptNode, word)}));
            break;
        }
        // one instance per concept or predicate name within this fact
        std::map<AtomId, AtomId> renamed;
        std::function<AtomId(AtomId)> copy = [&](AtomId id) -> AtomId {
            if (auto it = renamed.find(id); it != renamed.end()) return it->second;
            const Atom a = scratch[id];
            AtomId out;
            if (a.kind == AtomKind::ConceptNode || a.kind == AtomKind::PredicateNode) {
                const std::string& name = id == px ? f.x : id == py ? f.y : a.name;
                AtomId base = store.intern(a.kind, name);
                out = store.fresh_instance(name, a.kind);
                store.intern(a.kind == AtomKind::ConceptNode ? AtomKind::InheritanceLink : AtomKind::ImplicationLink,
                             std::vector<AtomId>{out, base});
            } else if (is_node(a.kind)) {
                out = store.intern(a.kind, a.name);
            } else {
                std::vector<AtomId> targets;
                for (AtomId t : a.targets) targets.push_back(copy(t));
                out = store.intern(a.kind, std::move(targets), a.tv);
            }
            renamed[id] = out;
            return out;
        };
        for (AtomId id : made) {
            AtomId out = copy(id);
            if (!f.tv.is_default() && !is_node(store[out].kind)) store.set_tv(out, f.tv);
        }
    }
}

void express(const ConstraintNetwork& net, const std::string& frame, const Bundle& bundle, AtomStore& store) {
    std::vector<GroundFact> facts;
    const auto& names = net.variables();
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            RelationSet r = net.relation(i, j);
            if (r.is_full()) continue;
            facts.push_back({frame, r, names[i], names[j], {}, ""});
        }
    express(facts, bundle, store);
}

// ---- generation ----

std::string sentence_text(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (t == "LEFT-WALL") continue;
        if (!out.empty() && t != "," && t != ".") out += ' ';
        for (char c : t) out += c == '_' ? ' ' : c;
    }
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

namespace {

std::vector<std::string> content_texts(const AtomStore& store) {
    std::set<std::string> out;
    for (AtomId r : store.roots())
        if (!is_scaffolding(store, r)) out.insert(generalized_text(store, r));
    return {out.begin(), out.end()};
}

bool covers(const std::vector<std::string>& tokens, const std::vector<std::string>& targets, const Bundle& bundle) {
    AtomStore s;
    try {
        comprehend(tokens, bundle, s);
    } catch (const DomainError&) {
        return false;
    }
    auto got = content_texts(s);
    return std::includes(got.begin(), got.end(), targets.begin(), targets.end());
}

// A unit is one content word, or "Region" followed by its number.
struct Unit {
    std::vector<std::string> tokens;
    int slot = -1;  // content slot index, -1 for function words
};

struct PrefixState {
    std::vector<std::pair<std::size_t, const Connector*>> stack;
    bool operator<(const PrefixState& o) const {
        if (stack.size() != o.stack.size()) return stack.size() < o.stack.size();
        for (std::size_t i = 0; i < stack.size(); ++i) {
            if (stack[i].first != o.stack[i].first) return stack[i].first < o.stack[i].first;
            if (stack[i].second->label != o.stack[i].second->label)
                return stack[i].second->label < o.stack[i].second->label;
        }
        return false;
    }
};

using StateSet = std::set<PrefixState>;

StateSet advance(const StateSet& states, const std::vector<Disjunct>& ds, std::size_t pos) {
    StateSet out;
    for (const PrefixState& s : states)
        for (const Disjunct& d : ds) {
            if (d.left.size() > s.stack.size()) continue;
            PrefixState n = s;
            bool ok = true;
            std::size_t last = static_cast<std::size_t>(-1);
            for (const Connector& c : d.left) {
                auto top = n.stack.back();
                if (top.first == last || !labels_match(top.second->label, c.label)) {
                    ok = false;
                    break;
                }
                n.stack.pop_back();
                last = top.first;
            }
            if (!ok) continue;
            for (auto it = d.right.rbegin(); it != d.right.rend(); ++it) n.stack.push_back({pos, &*it});
            out.insert(std::move(n));
        }
    return out;
}

class Searcher {
public:
    Searcher(const Bundle& bundle, std::vector<Unit> units, std::vector<int> need)
        : bundle_(bundle), units_(std::move(units)), need_(std::move(need)) {
        for (const auto& u : units_)
            for (const auto& t : u.tokens)
                for (const auto& d : bundle_.dict.lookup(t)->disjuncts) max_left_ = std::max(max_left_, d.left.size());
    }

    // Token sequences of exactly `length` tokens accepted by the stack
    // automaton with every content slot used as often as required.
    std::vector<std::vector<std::string>> run(std::size_t length) {
        found_.clear();
        dead_.clear();
        length_ = length;
        StateSet start{PrefixState{}};
        std::size_t pos = 0;
        if (bundle_.dict.has_wall()) {
            start = advance(start, bundle_.dict.find("LEFT-WALL")->disjuncts, 0);
            pos = 1;
        }
        seq_.clear();
        used_.assign(need_.size(), 0);
        walk(start, pos, 0);
        return found_;
    }

private:
    std::size_t remaining_content_tokens() const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < need_.size(); ++i) {
            if (used_[i] >= need_[i]) continue;
            std::size_t per = 0;
            for (const auto& u : units_)
                if (u.slot == static_cast<int>(i)) per = per == 0 ? u.tokens.size() : std::min(per, u.tokens.size());
            n += (need_[i] - used_[i]) * per;
        }
        return n;
    }

    void walk(const StateSet& states, std::size_t pos, std::size_t len) {
        if (len == length_) {
            bool done = std::any_of(states.begin(), states.end(), [](const PrefixState& s) { return s.stack.empty(); });
            for (std::size_t i = 0; i < need_.size(); ++i)
                if (used_[i] != need_[i]) done = false;
            if (done) found_.push_back(seq_);
            return;
        }
        const std::size_t left = length_ - len;
        if (remaining_content_tokens() > left) return;
        std::size_t min_stack = SIZE_MAX;
        for (const auto& s : states) min_stack = std::min(min_stack, s.stack.size());
        if (min_stack > left * max_left_) return;
        std::string key = std::to_string(len) + "|" + std::to_string(pos);
        for (int u : used_) key += "," + std::to_string(u);
        key += "|" + state_key(states);
        if (dead_.count(key)) return;
        const std::size_t before = found_.size();
        for (const Unit& u : units_) {
            if (u.slot >= 0 && used_[u.slot] >= need_[u.slot]) continue;
            if (u.tokens.size() > left) continue;
            StateSet cur = states;
            std::size_t p = pos;
            for (const auto& t : u.tokens) {
                cur = advance(cur, bundle_.dict.lookup(t)->disjuncts, p++);
                if (cur.empty()) break;
            }
            if (cur.empty()) continue;
            if (u.slot >= 0) ++used_[u.slot];
            seq_.insert(seq_.end(), u.tokens.begin(), u.tokens.end());
            walk(cur, p, len + u.tokens.size());
            seq_.resize(seq_.size() - u.tokens.size());
            if (u.slot >= 0) --used_[u.slot];
        }
        if (found_.size() == before) dead_.insert(std::move(key));
    }

    static std::string state_key(const StateSet& states) {
        std::string k;
        for (const auto& s : states) {
            for (auto [w, c] : s.stack) k += std::to_string(w) + ":" + c->label + ",";
            k += ";";
        }
        return k;
    }

    const Bundle& bundle_;
    std::vector<Unit> units_;
    std::vector<int> need_;
    std::size_t max_left_ = 0;
    std::size_t length_ = 0;
    std::vector<std::string> seq_;
    std::vector<int> used_;
    std::vector<std::vector<std::string>> found_;
    std::set<std::string> dead_;
};

std::vector<Unit> units_for_base(const std::string& base, const Dictionary& dict, int slot) {
    std::vector<Unit> out;
    for (const auto& [key, e] : dict.entries()) {
        if (e.word == "LEFT-WALL" || e.word == "NUMBER") continue;
        std::string lemma = dict.lemma(e.word);
        if (lemma == base || dict.pred_form(lemma) == base) out.push_back({{e.word}, slot});
    }
    static const std::regex numbered("(.+)-([0-9]+)");
    std::smatch m;
    if (std::regex_match(base, m, numbered) && dict.find("NUMBER")) {
        for (const auto& [key, e] : dict.entries())
            if (key == lower(m[1].str()) && e.word != "NUMBER") out.push_back({{e.word, m[2].str()}, slot});
    }
    return out;
}

}  // namespace

bool expresses(const std::vector<std::string>& tokens, const std::vector<std::string>& targets, const Bundle& bundle) {
    std::vector<std::string> sorted = targets;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    return covers(tokens, sorted, bundle);
}

bool aesthetic(const std::vector<std::string>& tokens, const std::vector<std::string>& targets, const Bundle& bundle) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::vector<std::string> shorter = tokens;
        shorter.erase(shorter.begin() + static_cast<std::ptrdiff_t>(i));
        if (shorter.empty()) continue;
        if (expresses(shorter, targets, bundle)) return false;
    }
    return true;
}

std::vector<GroupGeneration> generate(const AtomStore& store, const Bundle& bundle, GenerateOptions options) {
    std::vector<GroupGeneration> out;
    const auto inst = instance_nodes(store);
    for (const auto& group : atom_groups(store)) {
        GroupGeneration gen;
        std::set<std::string> targets;
        std::map<std::string, std::set<AtomId>> instances_of;  // base -> instance nodes
        std::vector<AtomId> content;
        for (AtomId r : group) {
            if (is_scaffolding(store, r)) continue;
            content.push_back(r);
            targets.insert(generalized_text(store, r));
            std::set<AtomId> nodes;
            collect_nodes(store, r, nodes);
            for (AtomId n : nodes) {
                const Atom& a = store[n];
                if (a.kind != AtomKind::ConceptNode && a.kind != AtomKind::PredicateNode) continue;
                auto split = split_instance(a.name);
                std::string base = inst.count(n) && split ? split->first : a.name;
                instances_of[base].insert(n);
            }
        }
        if (content.empty()) continue;
        gen.targets.assign(targets.begin(), targets.end());

        std::vector<Unit> units;
        std::vector<int> need;
        for (const auto& [base, nodes] : instances_of) {
            auto us = units_for_base(base, bundle.dict, static_cast<int>(need.size()));
            if (us.empty()) {
                for (AtomId r : content) {
                    std::set<AtomId> ns;
                    collect_nodes(store, r, ns);
                    for (AtomId n : nodes)
                        if (ns.count(n)) throw DomainError("unexpressible atom " + generalized_text(store, r) + ": no word for '" + base + "'");
                }
                throw DomainError("unexpressible atom: no word for '" + base + "'");
            }
            need.push_back(static_cast<int>(nodes.size()));
            units.insert(units.end(), us.begin(), us.end());
        }
        for (const auto& w : bundle.dict.function_words())
            if (bundle.dict.lookup(w)) units.push_back({{w}, -1});

        Searcher searcher(bundle, units, need);
        std::optional<std::size_t> first_success;
        for (std::size_t len = 1; len <= options.max_tokens; ++len) {
            if (first_success && len > *first_success + options.extra_lengths) break;
            for (auto& tokens : searcher.run(len)) {
                ParseResult parsed = parse(tokens, bundle.dict);
                if (parsed.linkages.empty()) continue;
                if (!covers(tokens, gen.targets, bundle)) continue;
                if (!aesthetic(tokens, gen.targets, bundle)) continue;
                Candidate c;
                c.sentence = sentence_text(tokens);
                c.link_length = parsed.linkages.front().total_length();
                c.tokens = std::move(tokens);
                gen.candidates.push_back(std::move(c));
                if (!first_success) first_success = len;
            }
        }
        if (gen.candidates.empty()) {
            std::string what;
            for (const auto& t : gen.targets) what += "\n  " + t;
            throw DomainError("search bound exceeded: no sentence of at most " + std::to_string(options.max_tokens) +
                              " tokens expresses" + what);
        }
        std::sort(gen.candidates.begin(), gen.candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.tokens.size() != b.tokens.size()) return a.tokens.size() < b.tokens.size();
            if (a.link_length != b.link_length) return a.link_length < b.link_length;
            return a.sentence < b.sentence;
        });
        gen.candidates.erase(std::unique(gen.candidates.begin(), gen.candidates.end(),
                                         [](const Candidate& a, const Candidate& b) { return a.sentence == b.sentence; }),
                             gen.candidates.end());
        out.push_back(std::move(gen));
    }
    return out;
}

// ---- chaining ----

ChainResult chain(const Scene* scene, const MovementTrace* trace, const Bundle& bundle, GenerateOptions options) {
    ChainResult out;
    std::set<std::tuple<std::string, std::string, std::string, std::uint16_t>> seen;
    auto add = [&](GroundFact f, const std::map<std::string, std::string>& type_of) {
        auto lift = [&](const std::string& name) {
            if (auto it = type_of.find(name); it != type_of.end()) return it->second;
            return name;
        };
        f.x = lift(f.x);
        f.y = lift(f.y);
        auto key = std::make_tuple(f.frame, f.x, f.y, f.relation.bits());
        auto conv = std::make_tuple(f.frame, f.y, f.x, f.relation.converse().bits());
        if (seen.count(key) || seen.count(conv)) return;
        seen.insert(key);
        out.facts.push_back(std::move(f));
    };
    if (scene) {
        AtomStore s;
        scene_to_atoms(*scene, s);
        std::map<std::string, std::string> type_of;
        for (const auto& e : scene->entities) type_of[e.id] = e.type;
        for (auto& f : ground(s, bundle, Side::Perception).facts) add(std::move(f), type_of);
    }
    if (trace) {
        AtomStore s;
        trace_to_atoms(*trace, s);
        std::map<std::string, std::string> type_of;
        std::map<std::string, int> count;
        for (const auto& inst : trace->instances) {
            const std::string name = inst.type + "@" + std::to_string(++count[inst.type]);
            type_of[name] = inst.type;
            type_of[inst.type] = inst.type;
        }
        for (auto& f : ground(s, bundle, Side::Action).facts) add(std::move(f), type_of);
    }
    AtomStore language;
    express(out.facts, bundle, language);
    out.generations = generate(language, bundle, options);
    return out;
}

}  // namespace mg
