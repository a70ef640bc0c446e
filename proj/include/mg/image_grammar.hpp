#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mg/atom.hpp"
#include "mg/link_grammar.hpp"
#include "mg/qualitative.hpp"

namespace mg {

// `ref_axis_rel` plus a sign, e.g. eye_h_G+, eye-nose_v_G-, pattern-7_h_EC+.
// On the h axis '+' points to larger coordinates (right). On the v axis,
// whose coordinates grow downward, '-' points down and '+' points up.
struct ImageConnector {
    std::string ref;  // entity type, or "s-t" pair of types
    char axis = 'h';  // h, v or d
    std::string rel;  // G, A, O or an RCC-8 name
    char sign = '+';

    std::string label() const;  // without the sign
    std::string to_string() const { return label() + sign; }
    static ImageConnector parse(const Connector& c);
};

struct SceneEntity {
    std::string id;
    std::string type;
    std::map<char, IntInterval> extent;  // per axis
};

struct Scene {
    std::vector<SceneEntity> entities;
    std::string axes;  // declared axes, e.g. "hv"

    // One entity per line: `id type h:[a,b] v:[c,d]`; '#' starts a comment.
    static Scene parse(std::string_view text);
    std::string to_text() const;
    const SceneEntity* find(std::string_view id) const;
};

// GAO relation of b as seen from a on one axis; Plus means b lies towards
// larger coordinates.
GaoRelation classify_pair(const SceneEntity& a, const SceneEntity& b, char axis);
// RCC-8 relation of the h x v boxes.
Rcc8 classify_boxes(const SceneEntity& a, const SceneEntity& b);

struct SceneLink {
    std::size_t a = 0;  // entity indices
    std::size_t b = 0;
    ImageConnector at_a;
    ImageConnector at_b;
};

struct SceneLinkage {
    std::vector<std::size_t> disjuncts;  // chosen disjunct per entity
    std::vector<SceneLink> links;
};

struct SceneCheck {
    std::optional<SceneLinkage> linkage;
    std::vector<std::string> violations;
    bool ok() const { return linkage.has_value(); }
};

// Whether connector `c` on entity `e` can be satisfied by `cp` on `p`.
bool connectors_pair(const SceneEntity& e, const ImageConnector& c, const SceneEntity& p, const ImageConnector& cp,
                     const Dictionary& grammar);

// One disjunct per entity and a link set satisfying every chosen connector,
// at most one link per entity pair and axis; no planarity. Otherwise the
// connectors that no other entity can satisfy, per entity and disjunct.
// DomainError for an entity type missing from the grammar.
SceneCheck validate_scene(const Dictionary& grammar, const Scene& scene);

std::string render_scene_linkage(const Scene& scene, const SceneLinkage& linkage);

// ConceptNode per entity with inheritance to its type; per entity pair and
// axis an evaluation gap_/abut_/overlap_<axis> with arguments in axis order;
// "adjacent" for externally connected boxes.
std::vector<AtomId> scene_to_atoms(const Scene& scene, AtomStore& store);

}  // namespace mg
