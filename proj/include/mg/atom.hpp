#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "mg/sexpr.hpp"

namespace mg {

enum class AtomKind : std::uint8_t {
    // nodes
    ConceptNode,
    PredicateNode,
    SpecificEntityNode,
    NumberNode,
    VariableNode,
    InterpretationNode,
    DefinedLinguisticConceptNode,
    DefinedLinguisticPredicateNode,
    // links
    EvaluationLink,
    ListLink,
    InheritanceLink,
    ImplicationLink,
    SatisfyingSetLink,
    NotLink,
    AndLink,
    OrLink,
    LambdaLink,
    EquivalenceLink,
};

bool is_node(AtomKind kind);
std::string_view kind_name(AtomKind kind);
std::optional<AtomKind> parse_kind(std::string_view name);

using AtomId = std::uint32_t;

// Strength in [0,1], count >= 0. Confidence is count / (count + 1).
struct TruthValue {
    double strength = 1.0;
    double count = 1.0;

    double confidence() const { return count / (count + 1.0); }
    bool is_default() const { return strength == 1.0 && count == 1.0; }
    friend bool operator==(const TruthValue&, const TruthValue&) = default;
};

struct Atom {
    AtomKind kind;
    std::string name;             // nodes only
    std::vector<AtomId> targets;  // links only
    TruthValue tv;
};

class AtomStore {
public:
    // Returns the existing atom on a duplicate. A supplied truth value
    // replaces the stored one only when its count is larger.
    AtomId intern(AtomKind kind, std::string_view name, std::optional<TruthValue> tv = {});
    AtomId intern(AtomKind kind, std::vector<AtomId> targets, std::optional<TruthValue> tv = {});

    std::optional<AtomId> find(AtomKind kind, std::string_view name) const;
    std::optional<AtomId> find(AtomKind kind, const std::vector<AtomId>& targets) const;

    const Atom& operator[](AtomId id) const { return atoms_.at(id); }
    std::size_t size() const { return atoms_.size(); }

    void set_tv(AtomId id, TruthValue tv);

    // Instance names are base@k with k counting up per base from 1.
    std::string next_instance_name(std::string_view base);
    AtomId fresh_instance(std::string_view base, AtomKind kind = AtomKind::ConceptNode);

    // Atoms that are not a target of any other link, in id order.
    std::vector<AtomId> roots() const;
    bool mentions(AtomId root, AtomId atom) const;

    // Copy the tree rooted at `id` in `other` into this store.
    AtomId import(const AtomStore& other, AtomId id);

    std::string render(AtomId id, bool with_tv = true, int indent = -1) const;
    std::string to_text() const;
    static AtomStore from_text(std::string_view text);

    // Content equality, independent of insertion order.
    friend bool operator==(const AtomStore& a, const AtomStore& b);

private:
    using Key = std::tuple<AtomKind, std::string, std::vector<AtomId>>;
    AtomId add(AtomKind kind, std::string name, std::vector<AtomId> targets, std::optional<TruthValue> tv);
    void note_instance(std::string_view name);

    std::vector<Atom> atoms_;
    std::map<Key, AtomId> index_;
    std::unordered_map<std::string, int> counters_;
};

// Splits "base@k" into base and suffix; nullopt if there is no '@' with
// text on both sides.
std::optional<std::pair<std::string, std::string>> split_instance(std::string_view name);

// Equality after renaming instance suffixes bijectively within each base.
bool equal_up_to_renaming(const AtomStore& a, const AtomStore& b);

// Adds generalized copies of evaluation, negation and satisfying-set
// inheritance structures in which every instance (a node x@k that inherits
// from or implies a node of its own kind) is replaced by x. Returns the ids of
// the generalized atoms. Idempotent.
std::vector<AtomId> normalize_instances(AtomStore& store);

// Generalized form of one atom as text, without adding it to the store.
std::string generalized_text(const AtomStore& store, AtomId id);

// ---- patterns ----

struct PatternNode {
    AtomKind kind = AtomKind::ConceptNode;
    std::string name;  // node name, or the variable name for VariableNode
    std::vector<PatternNode> children;

    bool is_variable() const { return kind == AtomKind::VariableNode; }
};

struct AtomPattern {
    PatternNode root;
    std::vector<std::string> variables;  // in order of first appearance

    static AtomPattern parse(std::string_view text);
    static AtomPattern from_sexpr(const SExpr& e);
};

using Binding = std::map<std::string, AtomId>;

// All bindings under which the instantiated pattern is an atom of the store,
// extending `seed`. Sorted by the rendered text of the bound atoms.
std::vector<Binding> match(const AtomPattern& pattern, const AtomStore& store, const Binding& seed = {});
std::vector<Binding> match_all(std::span<const AtomPattern> patterns, const AtomStore& store);

// Matches a pattern against one given atom.
bool unify(const PatternNode& pattern, const AtomStore& store, AtomId id, Binding& binding);

AtomId substitute(const AtomPattern& pattern, const Binding& binding, AtomStore& store);
AtomId substitute(const PatternNode& pattern, const Binding& binding, AtomStore& store);

}  // namespace mg
