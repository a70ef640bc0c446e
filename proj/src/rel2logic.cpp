#include "mg/rel2logic.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include "mg/error.hpp"

namespace mg {

namespace {

RuleTerm read_term(const SExpr& e) {
    if (e.is_list()) e.fail("expected a variable or literal");
    if (e.is_symbol() && !e.text.empty() && e.text[0] == '$') return {true, e.text};
    return {false, e.text};
}

RuleEdge read_edge(const SExpr& e) {
    if (!e.is_list() || e.items.size() != 3 || !e.items[0].is_symbol()) e.fail("expected (NAME HEAD DEP)");
    return {e.items[0].text, read_term(e.items[1]), read_term(e.items[2])};
}

void collect_template_vars(const PatternNode& p, std::vector<std::string>& out) {
    if (is_node(p.kind)) {
        if (!p.name.empty() && p.name[0] == '$' && std::find(out.begin(), out.end(), p.name) == out.end())
            out.push_back(p.name);
        return;
    }
    for (const auto& c : p.children) collect_template_vars(c, out);
}

const PatternNode* at_path(const PatternNode& root, const std::vector<std::size_t>& path) {
    const PatternNode* p = &root;
    for (std::size_t i : path) {
        if (i >= p->children.size()) return nullptr;
        p = &p->children[i];
    }
    return p;
}

bool mentions_var(const PatternNode& p, const std::string& var) {
    if (is_node(p.kind)) return p.name == var;
    return std::any_of(p.children.begin(), p.children.end(), [&](auto& c) { return mentions_var(c, var); });
}

}  // namespace

std::string RuleEdge::to_string() const {
    auto t = [](const RuleTerm& x) { return x.variable ? x.text : quote(x.text); };
    return "(" + name + " " + t(head) + " " + t(dep) + ")";
}

RuleBase RuleBase::load(std::string_view text) {
    RuleBase base;
    std::set<std::string> names;
    for (const SExpr& e : parse_sexprs(text)) {
        if (e.head() != "rule" || e.items.size() < 2 || !e.items[1].is_symbol()) e.fail("expected (rule NAME ...)");
        MappingRule r;
        r.name = e.items[1].text;
        if (!names.insert(r.name).second) e.items[1].fail("duplicate rule name '" + r.name + "'");
        bool have_a = false;
        for (std::size_t i = 2; i < e.items.size(); ++i) {
            const SExpr& part = e.items[i];
            std::string_view h = part.head();
            if (h == "vars") {
                for (std::size_t k = 1; k < part.items.size(); ++k) {
                    RuleTerm t = read_term(part.items[k]);
                    if (!t.variable) part.items[k].fail("variables start with '$'");
                    r.vars.push_back(t.text);
                }
            } else if (h == "g") {
                for (std::size_t k = 1; k < part.items.size(); ++k) r.g.push_back(read_edge(part.items[k]));
            } else if (h == "unless") {
                for (std::size_t k = 1; k < part.items.size(); ++k) r.unless.push_back(read_edge(part.items[k]));
            } else if (h == "where") {
                for (std::size_t k = 1; k < part.items.size(); ++k) {
                    const SExpr& c = part.items[k];
                    if (!c.is_list() || c.items.size() != 3 || (c.head() != "eq" && c.head() != "neq"))
                        c.fail("expected (eq|neq $var \"literal\")");
                    RuleTerm v = read_term(c.items[1]);
                    if (!v.variable) c.items[1].fail("expected a variable");
                    r.where.push_back({c.head() == "eq", v.text, read_term(c.items[2]).text});
                }
            } else if (h == "a") {
                if (part.items.size() != 2) part.fail("(a TEMPLATE) takes one template");
                r.a = AtomPattern::from_sexpr(part.items[1]).root;
                have_a = true;
            } else if (h == "map") {
                for (std::size_t k = 1; k < part.items.size(); ++k) {
                    const SExpr& m = part.items[k];
                    if (!m.is_list() || m.items.size() != 2 || !m.items[1].is_list()) m.fail("expected (EDGE (PATH...))");
                    std::vector<std::size_t> path;
                    for (const SExpr& idx : m.items[1].items) {
                        if (!idx.is_symbol() || idx.text.empty() ||
                            !std::all_of(idx.text.begin(), idx.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
                            idx.fail("path entries are child indices");
                        path.push_back(std::stoul(idx.text));
                    }
                    r.edge_map.push_back({read_edge(m.items[0]), path});
                }
            } else {
                part.fail("unknown rule section '" + std::string(h) + "'");
            }
        }
        if (!have_a) e.fail("rule '" + r.name + "' has no template");
        base.rules.push_back(std::move(r));
    }
    return base;
}

std::vector<std::string> validate_rule(const MappingRule& rule) {
    std::vector<std::string> v;
    std::vector<std::string> gvars, avars;
    for (const auto& e : rule.g)
        for (const RuleTerm* t : {&e.head, &e.dep})
            if (t->variable && std::find(gvars.begin(), gvars.end(), t->text) == gvars.end()) gvars.push_back(t->text);
    collect_template_vars(rule.a, avars);
    auto sorted = [](std::vector<std::string> x) {
        std::sort(x.begin(), x.end());
        return x;
    };
    if (sorted(gvars) != sorted(rule.vars)) v.push_back("variables of G differ from the declared list");
    if (sorted(avars) != sorted(rule.vars)) v.push_back("variables of A differ from the declared list");
    for (const auto& c : rule.where)
        if (std::find(gvars.begin(), gvars.end(), c.variable) == gvars.end())
            v.push_back("condition on " + c.variable + " which G does not bind");

    for (const auto& e : rule.g) {
        std::size_t images = 0;
        for (const auto& [me, path] : rule.edge_map) {
            if (!(me == e)) continue;
            ++images;
            const PatternNode* target = at_path(rule.a, path);
            if (!target) {
                v.push_back("edge " + e.to_string() + " maps to a missing path");
                continue;
            }
            if (is_node(target->kind)) {
                v.push_back("edge " + e.to_string() + " maps to a node, not a hyperlink");
                continue;
            }
            for (const RuleTerm* t : {&e.head, &e.dep})
                if (t->variable && !mentions_var(*target, t->text))
                    v.push_back("edge " + e.to_string() + " maps to a hyperlink without " + t->text);
        }
        if (images == 0) v.push_back("edge " + e.to_string() + " is not mapped");
        if (images > 1) v.push_back("edge " + e.to_string() + " maps to " + std::to_string(images) + " hyperlinks");
    }
    for (const auto& [me, path] : rule.edge_map)
        if (std::find(rule.g.begin(), rule.g.end(), me) == rule.g.end())
            v.push_back("map entry " + me.to_string() + " is not an edge of G");

    std::function<void(const PatternNode&)> nodes = [&](const PatternNode& p) {
        if (!is_node(p.kind)) {
            for (const auto& c : p.children) nodes(c);
            return;
        }
        if (!p.name.empty() && p.name[0] == '$') return;
        switch (p.kind) {
            case AtomKind::ConceptNode:
            case AtomKind::PredicateNode:
            case AtomKind::DefinedLinguisticConceptNode:
            case AtomKind::DefinedLinguisticPredicateNode:
                return;
            default:
                v.push_back("constant " + std::string(kind_name(p.kind)) + " \"" + p.name + "\" is not a word or linguistic node");
        }
    };
    nodes(rule.a);
    return v;
}

namespace {

struct Value {
    bool token = false;
    std::size_t index = 0;
    std::string text;  // lemma for tokens, the value otherwise

    bool operator==(const Value& o) const { return token == o.token && (token ? index == o.index : text == o.text); }
};

using Env = std::map<std::string, Value>;

struct GraphEdge {
    std::string name;
    Value head;
    Value dep;
};

bool bind(const RuleTerm& t, const Value& v, Env& env) {
    if (!t.variable) return v.text == t.text;
    if (t.text == "$_") return true;
    auto [it, fresh] = env.emplace(t.text, v);
    return fresh || it->second == v;
}

void match_edges(const std::vector<RuleEdge>& pattern, std::size_t k, const std::vector<GraphEdge>& edges, Env env,
                 std::vector<Env>& out) {
    if (k == pattern.size()) {
        out.push_back(std::move(env));
        return;
    }
    for (const GraphEdge& e : edges) {
        if (e.name != pattern[k].name) continue;
        Env next = env;
        if (bind(pattern[k].head, e.head, next) && bind(pattern[k].dep, e.dep, next))
            match_edges(pattern, k + 1, edges, std::move(next), out);
    }
}

std::string logic_gender(const Dictionary& dict, const std::string& surface) {
    for (const auto& args : dict.annotations("gender"))
        if (args.size() == 3 && Dictionary::key(args[0]) == Dictionary::key(surface)) return args[2];
    return "";
}

}  // namespace

ApplyResult apply(const RuleBase& rules, const DepGraph& dep, const Dictionary& dict, AtomStore& store) {
    ApplyResult result;
    std::vector<GraphEdge> edges;
    auto tokval = [&](std::size_t i) { return Value{true, i, dep.tokens[i].lemma}; };
    for (const auto& r : dep.relations) edges.push_back({r.name, tokval(r.head), tokval(r.dep)});
    for (const auto& a : dep.attributes) edges.push_back({a.name, tokval(a.token), Value{false, 0, a.value}});

    std::set<std::size_t> heads;
    for (const auto& r : dep.relations) heads.insert(r.head);
    std::map<std::size_t, std::string> instance;
    std::set<std::pair<std::size_t, AtomKind>> scaffolded;
    std::set<AtomId> produced;

    auto note = [&](AtomId id, bool scaffold) {
        if (produced.insert(id).second) {
            result.atoms.push_back(id);
            if (scaffold) result.scaffolding.push_back(id);
        }
    };

    auto instance_atom = [&](std::size_t tok, AtomKind kind) {
        const DepToken& t = dep.tokens[tok];
        auto it = instance.find(tok);
        if (it == instance.end()) {
            std::string base = heads.count(tok) ? dict.pred_form(t.lemma) : t.lemma;
            it = instance.emplace(tok, store.next_instance_name(base)).first;
        }
        AtomId id = store.intern(kind, it->second);
        if (scaffolded.insert({tok, kind}).second) {
            if (kind == AtomKind::PredicateNode) {
                note(store.intern(AtomKind::ImplicationLink, {id, store.intern(AtomKind::PredicateNode, t.lemma)}), true);
            } else if (kind == AtomKind::ConceptNode) {
                note(store.intern(AtomKind::InheritanceLink, {id, store.intern(AtomKind::ConceptNode, t.lemma)}), true);
                std::string g = logic_gender(dict, t.surface);
                if (t.proper && !g.empty()) {
                    AtomId se = store.intern(AtomKind::SpecificEntityNode, it->second);
                    note(store.intern(AtomKind::InheritanceLink,
                                      {se, store.intern(AtomKind::DefinedLinguisticConceptNode, g)}),
                         true);
                    note(store.intern(AtomKind::InheritanceLink, {se, store.intern(AtomKind::ConceptNode, t.lemma)}),
                         true);
                }
                if (t.number) {
                    AtomId num = store.intern(AtomKind::NumberNode, *t.number);
                    AtomId list = store.intern(AtomKind::ListLink, {id, num});
                    note(store.intern(AtomKind::EvaluationLink,
                                      {store.intern(AtomKind::DefinedLinguisticPredicateNode, "number"), list}),
                         true);
                }
            }
        }
        return id;
    };

    for (const MappingRule& rule : rules.rules) {
        std::vector<Env> envs;
        match_edges(rule.g, 0, edges, {}, envs);
        for (const Env& env : envs) {
            bool ok = true;
            for (const auto& c : rule.where) {
                auto it = env.find(c.variable);
                if (it == env.end() || (it->second.text == c.literal) != c.equal) ok = false;
            }
            if (ok && !rule.unless.empty()) {
                std::vector<Env> blocked;
                match_edges(rule.unless, 0, edges, env, blocked);
                ok = blocked.empty();
            }
            if (!ok) continue;

            std::function<AtomId(const PatternNode&)> build = [&](const PatternNode& p) -> AtomId {
                if (is_node(p.kind)) {
                    if (!p.name.empty() && p.name[0] == '$') {
                        const Value& v = env.at(p.name);
                        if (v.token) return instance_atom(v.index, p.kind);
                        return store.intern(p.kind, v.text);
                    }
                    return store.intern(p.kind, p.name);
                }
                std::vector<AtomId> kids;
                for (const auto& c : p.children) kids.push_back(build(c));
                return store.intern(p.kind, std::move(kids));
            };
            RuleFiring f;
            f.rule = rule.name;
            for (const auto& [k, v] : env) f.binding[k] = v.text;
            f.root = build(rule.a);
            for (const auto& e : rule.g)
                for (const auto& [me, path] : rule.edge_map)
                    if (me == e) {
                        AtomId id = f.root;
                        for (std::size_t i : path) id = store[id].targets.at(i);
                        f.edge_links.push_back(id);
                    }
            note(f.root, false);
            result.firings.push_back(std::move(f));
        }
    }

    std::string sentence = store.next_instance_name("sentence") + "_parse_0_interpretation_$X";
    note(store.intern(AtomKind::InheritanceLink,
                      {store.intern(AtomKind::InterpretationNode, sentence),
                       store.intern(AtomKind::DefinedLinguisticConceptNode, "DeclarativeSpeechAct")}),
         true);
    return result;
}

}  // namespace mg
