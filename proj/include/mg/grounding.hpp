#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mg/action_grammar.hpp"
#include "mg/atom.hpp"
#include "mg/image_grammar.hpp"
#include "mg/link_grammar.hpp"
#include "mg/qualitative.hpp"
#include "mg/rel2logic.hpp"
#include "mg/relex.hpp"

namespace mg {

enum class Side { Language, Perception, Action };

std::string_view side_name(Side s);

// Frame of a relation: "rcc8" for regions, "allen:h", "allen:v" for image
// axes, "allen:t" for time.
Algebra frame_algebra(std::string_view frame);

// Equivalence between a conjunction of logic patterns over $x and $y and a
// qualitative relation between x and y. The first conjunct is the core; a
// negated core grounds to the complement.
struct GroundingRule {
    std::string name;
    Side side = Side::Language;
    std::string frame;
    RelationSet relation{Algebra::Rcc8};
    std::vector<AtomPattern> logic;
    TruthValue tv;
    std::string phrase;
};

struct Bundle {
    std::string name;
    Dictionary dict;
    RuleBase rules;
    std::vector<GroundingRule> grounding;
    std::map<std::string, double> qualifiers;  // adverb -> strength

    // Reads dictionary.dict, mapping.rules and (optionally) grounding.rules.
    static Bundle load(const std::filesystem::path& dir);
    static std::vector<GroundingRule> parse_grounding(std::string_view text, std::map<std::string, double>* qualifiers);
};

// Data root: explicit argument, else $MG_DATA, else the compiled default.
std::filesystem::path data_root(const std::optional<std::string>& flag = std::nullopt);
// A bundle name under <root>/bundles, or a directory path.
std::filesystem::path resolve_bundle(const std::string& name_or_path, const std::filesystem::path& root);

// ---- comprehension ----

struct Comprehension {
    Linkage linkage;
    std::size_t alternatives = 0;  // number of linkages found
    DepGraph dep;
    ApplyResult applied;
    std::vector<AtomId> generalized;
};

// parse -> extract -> apply -> normalize_instances into `store`, using the
// top-ranked linkage. DomainError when there is no parse.
Comprehension comprehend(const std::vector<std::string>& tokens, const Bundle& bundle, AtomStore& store);
Comprehension comprehend(std::string_view sentence, const Bundle& bundle, AtomStore& store);

// ---- grounding ----

struct GroundFact {
    std::string frame;
    RelationSet relation{Algebra::Rcc8};
    std::string x;
    std::string y;
    TruthValue tv;
    std::string rule;

    std::string to_string() const;  // "rcc8 Jack Jill {PO}"
};

struct GroundResult {
    std::vector<GroundFact> facts;
    std::vector<std::string> unmatched;  // content atoms no rule accounted for

    // One network per frame; facts on the same pair intersect.
    std::map<std::string, ConstraintNetwork> networks() const;
    ConstraintNetwork network(const std::string& frame) const;
};

// True for instance scaffolding, linguistic flags and speech acts.
bool is_scaffolding(const AtomStore& store, AtomId id);

// Content roots partitioned into groups that share a predicate instance;
// each group is returned with the scaffolding of the instances it mentions.
std::vector<std::vector<AtomId>> atom_groups(const AtomStore& store);

GroundResult ground(const AtomStore& store, const Bundle& bundle, Side side = Side::Language);

// ---- expression and generation ----

// Canonical logic atoms for each fact, one predicate instance per fact.
// DomainError when no rule of the bundle expresses a fact's relation.
void express(const std::vector<GroundFact>& facts, const Bundle& bundle, AtomStore& store);
void express(const ConstraintNetwork& net, const std::string& frame, const Bundle& bundle, AtomStore& store);

struct Candidate {
    std::string sentence;
    std::vector<std::string> tokens;
    std::size_t link_length = 0;
};

struct GroupGeneration {
    std::vector<std::string> targets;  // generalized content atoms
    std::vector<Candidate> candidates;  // best first
};

struct GenerateOptions {
    std::size_t max_tokens = 14;
    std::size_t extra_lengths = 1;  // lengths searched beyond the shortest success
};

// Inverts comprehension per atom group: searches token sequences the grammar
// accepts, keeps those whose comprehension contains every target
// (expressiveness) and from which no single word can be deleted
// (aesthetics), ranked by length, link length, then text.
std::vector<GroupGeneration> generate(const AtomStore& store, const Bundle& bundle, GenerateOptions options = {});

// Expressiveness and aesthetic checks on a given token sequence.
bool expresses(const std::vector<std::string>& tokens, const std::vector<std::string>& targets, const Bundle& bundle);
bool aesthetic(const std::vector<std::string>& tokens, const std::vector<std::string>& targets, const Bundle& bundle);

std::string sentence_text(const std::vector<std::string>& tokens);

struct ChainResult {
    std::vector<GroundFact> facts;  // over entity and animation types
    std::vector<GroupGeneration> generations;
};

// Scene and trace atoms grounded by the perception and action rules, lifted
// from entity ids and animation instances to their types, expressed by the
// language rules and generated.
ChainResult chain(const Scene* scene, const MovementTrace* trace, const Bundle& bundle, GenerateOptions options = {});

}  // namespace mg
