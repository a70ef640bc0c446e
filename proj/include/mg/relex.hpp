#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mg/link_grammar.hpp"

namespace mg {

struct DepToken {
    std::size_t index = 0;    // position in the linkage
    std::string surface;      // token as written
    std::string lemma;        // "chase", "region-5" for a numbered noun
    std::string subscript;    // ".v-d", ".n", ...
    std::string pos;          // empty when the subscript says nothing
    bool proper = false;
    bool plural = false;
    std::optional<std::string> gender;
    std::optional<std::string> number;  // digits attached by an NM link
};

struct DepRelation {
    std::string name;  // _subj, _obj, _advmod
    std::size_t head = 0;
    std::size_t dep = 0;

    friend auto operator<=>(const DepRelation&, const DepRelation&) = default;
};

struct Attribute {
    std::string name;  // tense, pos, noun_number, definite-FLAG, gender
    std::size_t token = 0;
    std::string value;

    friend auto operator<=>(const Attribute&, const Attribute&) = default;
};

struct DepGraph {
    std::vector<DepToken> tokens;  // indexed like the linkage
    std::vector<DepRelation> relations;
    std::vector<Attribute> attributes;
    std::vector<std::string> unhandled;  // link labels without a rule

    // Relations and attributes as "name(head, dep)" strings over lemmas,
    // sorted; for comparing graphs built from different surface forms.
    std::vector<std::string> relation_strings() const;
    std::vector<std::string> attribute_strings() const;
    std::string report() const;
};

// Maps a linkage to dependency relations and attributes with a fixed table
// keyed by link label. Active and passive frames yield the same relations.
DepGraph extract(const Linkage& linkage, const Dictionary& dict);

}  // namespace mg
