#pragma once

#include <map>
#include <string>
#include <vector>

#include "mg/atom.hpp"
#include "mg/link_grammar.hpp"
#include "mg/relex.hpp"

namespace mg {

// A term in a dependency pattern: a rule variable ($x) or a literal that must
// equal a token lemma or attribute value.
struct RuleTerm {
    bool variable = false;
    std::string text;

    friend bool operator==(const RuleTerm&, const RuleTerm&) = default;
};

// One edge of G: a relation (_subj $v $s) or an attribute guard (tense $v $t).
struct RuleEdge {
    std::string name;
    RuleTerm head;
    RuleTerm dep;

    std::string to_string() const;
    friend bool operator==(const RuleEdge&, const RuleEdge&) = default;
};

struct RuleCondition {
    bool equal = false;  // eq or neq
    std::string variable;
    std::string literal;
};

// Simple mapping rule (G, A): dependency pattern G, atom template A in which
// node names starting with '$' are filled from G's bindings, and an edge map
// sending each edge of G to one hyperlink of A (a child-index path).
struct MappingRule {
    std::string name;
    std::vector<std::string> vars;
    std::vector<RuleEdge> g;
    std::vector<RuleEdge> unless;
    std::vector<RuleCondition> where;
    PatternNode a;
    std::vector<std::pair<RuleEdge, std::vector<std::size_t>>> edge_map;
};

struct RuleBase {
    std::vector<MappingRule> rules;

    // (rule NAME (vars ...) (g ...) [(unless ...)] [(where ...)] (a TEMPLATE) (map (EDGE PATH) ...))
    static RuleBase load(std::string_view text);
};

// Homomorphism checks: declared, G and A variable lists agree; every edge is
// mapped to exactly one hyperlink that contains its endpoints; A's constant
// nodes are words or linguistic nodes. Empty when the rule is valid.
std::vector<std::string> validate_rule(const MappingRule& rule);

struct RuleFiring {
    std::string rule;
    std::map<std::string, std::string> binding;  // variable -> lemma or value
    AtomId root = 0;
    std::vector<AtomId> edge_links;  // image of each G edge, in G order
};

struct ApplyResult {
    std::vector<AtomId> atoms;  // every root atom produced, scaffolding included
    std::vector<RuleFiring> firings;
    std::vector<AtomId> scaffolding;
};

// Applies every rule to every match in the graph. Each token gets a single
// instance node word@k, shared by all rules, with inheritance (concepts) or
// implication (predicates) to its lemma; one declarative speech act is added.
ApplyResult apply(const RuleBase& rules, const DepGraph& dep, const Dictionary& dict, AtomStore& store);

}  // namespace mg
