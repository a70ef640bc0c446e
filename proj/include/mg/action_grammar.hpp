#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mg/atom.hpp"
#include "mg/link_grammar.hpp"
#include "mg/qualitative.hpp"

namespace mg {

// `A_r` plus a sign. r is g, a or o (gap, abut, overlap) or an Allen name.
// '+' means the partner comes later: for letters the partner lies after,
// for an Allen name r, r(this, partner) holds.
struct ActionConnector {
    std::string animation;
    std::string rel;
    char sign = '+';

    std::string to_string() const { return animation + "_" + rel + sign; }
    static ActionConnector parse(const Connector& c);
};

struct AnimationType {
    std::string name;
    std::set<std::string> actuators;
    std::vector<std::pair<double, double>> param_box;  // one closed interval per parameter
};

// Grammar entries use the link-grammar dictionary syntax; animation types
// are declared as `#animation NAME ACT,ACT,... [lo,hi] ...;`.
struct ActionGrammar {
    Dictionary dict;
    std::map<std::string, AnimationType> types;

    static ActionGrammar load(std::string_view text);
};

struct AnimationInstance {
    std::string id;
    std::string type;
    IntInterval interval;
    std::vector<double> params;
    std::optional<std::string> parent;
};

struct MovementTrace {
    std::vector<AnimationInstance> instances;
    std::vector<std::pair<std::string, std::string>> links;  // extra coordination dependencies

    // One instance per line `id type [start,end] params... parent?`, or
    // `link ID ID` for a coordination dependency; '#' starts a comment.
    static MovementTrace parse(std::string_view text);
    std::optional<std::size_t> index_of(std::string_view id) const;
};

struct TraceLink {
    std::size_t a = 0;
    std::size_t b = 0;
    ActionConnector at_a;
    ActionConnector at_b;
};

struct MovementCheck {
    std::optional<std::vector<TraceLink>> links;
    std::vector<std::size_t> disjuncts;
    std::vector<std::string> violations;
    bool ok() const { return links.has_value() && violations.empty(); }
};

bool action_connectors_pair(const AnimationInstance& e, const ActionConnector& c, const AnimationInstance& p,
                            const ActionConnector& cp);

// Same satisfaction semantics as scene validation, over time intervals.
// Parameters outside the declared box are violations. DomainError for an
// instance type without a grammar entry.
MovementCheck validate_movement(const ActionGrammar& grammar, const MovementTrace& trace);

// Children use a subset of their parent's actuators, within its interval.
std::vector<std::string> check_hierarchy(const ActionGrammar& grammar, const MovementTrace& trace);

// Instances ordered by (start, id); positions in that order.
std::vector<std::size_t> trace_order(const MovementTrace& trace);
// Parent links plus coordination links as pairs of instance indices.
std::vector<std::pair<std::size_t, std::size_t>> dependency_links(const MovementTrace& trace);
// No two dependency links cross in the (start, id) order.
bool check_no_cross(const MovementTrace& trace, const std::vector<std::pair<std::size_t, std::size_t>>& links);
bool check_no_cross(const MovementTrace& trace);

// Instances type@k inheriting from their type; one Allen evaluation per
// instance pair, in trace order.
std::vector<AtomId> trace_to_atoms(const MovementTrace& trace, AtomStore& store);

}  // namespace mg
