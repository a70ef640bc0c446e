#include "mg/image_grammar.hpp"

#include <algorithm>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

#include "link_matching.hpp"
#include "mg/error.hpp"

namespace mg {

namespace {

bool is_rcc_name(const std::string& rel) { return parse_base(Algebra::Rcc8, rel).has_value(); }

// Direction in which the partner lies, as the connector's sign means it.
GaoSign sign_direction(char axis, char sign) {
    bool plus = sign == '+';
    if (axis == 'v') plus = !plus;
    return plus ? GaoSign::Plus : GaoSign::Minus;
}

GaoSign center_order(const IntInterval& a, const IntInterval& b) {
    int ca = a.start + a.end, cb = b.start + b.end;
    if (cb > ca) return GaoSign::Plus;
    if (cb < ca) return GaoSign::Minus;
    return GaoSign::Even;
}

const IntInterval& extent_on(const SceneEntity& e, char axis) {
    auto it = e.extent.find(axis);
    if (it == e.extent.end()) throw Error("entity '" + e.id + "' has no extent on axis " + std::string(1, axis));
    return it->second;
}

}  // namespace

std::string ImageConnector::label() const { return ref + "_" + std::string(1, axis) + "_" + rel; }

ImageConnector ImageConnector::parse(const Connector& c) {
    static const std::regex form("(.+)_([hvd])_([A-Za-z]+)");
    std::smatch m;
    if (!std::regex_match(c.label, m, form)) throw Error("bad image connector '" + c.to_string() + "'");
    ImageConnector ic;
    ic.ref = m[1].str();
    ic.axis = m[2].str()[0];
    ic.rel = m[3].str();
    ic.sign = c.dir;
    if (ic.rel != "G" && ic.rel != "A" && ic.rel != "O" && !is_rcc_name(ic.rel))
        throw Error("bad relation in image connector '" + c.to_string() + "'");
    return ic;
}

Scene Scene::parse(std::string_view text) {
    Scene s;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    static const std::regex axis_field("([hvd]):\\[(-?[0-9]+),(-?[0-9]+)\\]");
    std::set<std::string> ids;
    std::set<char> axes;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        SceneEntity e;
        if (!(fields >> e.id)) continue;
        if (!(fields >> e.type)) throw ParseError("entity '" + e.id + "' needs a type", line_no, 1);
        std::string f;
        while (fields >> f) {
            std::smatch m;
            if (!std::regex_match(f, m, axis_field)) throw ParseError("bad extent '" + f + "'", line_no, 1);
            IntInterval iv{std::stoi(m[2].str()), std::stoi(m[3].str())};
            if (iv.start >= iv.end) throw ParseError("degenerate interval '" + f + "'", line_no, 1);
            e.extent[m[1].str()[0]] = iv;
        }
        if (e.extent.empty()) throw ParseError("entity '" + e.id + "' has no extent", line_no, 1);
        if (!ids.insert(e.id).second) throw ParseError("duplicate entity id '" + e.id + "'", line_no, 1);
        for (auto& [a, iv] : e.extent) axes.insert(a);
        s.entities.push_back(std::move(e));
    }
    for (char a : {'h', 'v', 'd'})
        if (axes.count(a)) s.axes += a;
    for (const auto& e : s.entities)
        for (char a : s.axes)
            if (!e.extent.count(a)) throw ParseError("entity '" + e.id + "' lacks axis " + std::string(1, a), 1, 1);
    return s;
}

std::string Scene::to_text() const {
    std::string out;
    for (const auto& e : entities) {
        out += e.id + " " + e.type;
        for (auto& [a, iv] : e.extent)
            out += " " + std::string(1, a) + ":[" + std::to_string(iv.start) + "," + std::to_string(iv.end) + "]";
        out += "\n";
    }
    return out;
}

const SceneEntity* Scene::find(std::string_view id) const {
    for (const auto& e : entities)
        if (e.id == id) return &e;
    return nullptr;
}

GaoRelation classify_pair(const SceneEntity& a, const SceneEntity& b, char axis) {
    return coarsen_to_gao(allen_classify(extent_on(a, axis), extent_on(b, axis)));
}

Rcc8 classify_boxes(const SceneEntity& a, const SceneEntity& b) {
    return rcc8_classify_boxes(extent_on(a, 'h'), extent_on(a, 'v'), extent_on(b, 'h'), extent_on(b, 'v'));
}

bool connectors_pair(const SceneEntity& e, const ImageConnector& c, const SceneEntity& p, const ImageConnector& cp,
                     const Dictionary& grammar) {
    if (c.axis != cp.axis || c.rel != cp.rel || c.sign == cp.sign) return false;
    const std::string te = Dictionary::key(e.type), tp = Dictionary::key(p.type);
    const std::string re = Dictionary::key(c.ref), rp = Dictionary::key(cp.ref);
    if (grammar.find(re)) {
        // single references name each other's types
        if (re != tp || rp != te) return false;
    } else {
        if (re != rp) return false;
        bool typed = false;
        for (std::size_t dash = re.find('-'); dash != std::string::npos; dash = re.find('-', dash + 1)) {
            std::string s = re.substr(0, dash), t = re.substr(dash + 1);
            if ((s == te && t == tp) || (s == tp && t == te)) typed = true;
        }
        if (!typed) return false;
    }
    if (!e.extent.count(c.axis) || !p.extent.count(c.axis)) return false;
    const GaoSign want = sign_direction(c.axis, c.sign);
    if (is_rcc_name(c.rel)) {
        if (name(classify_boxes(e, p)) != c.rel) return false;
        GaoSign order = center_order(extent_on(e, c.axis), extent_on(p, c.axis));
        return order == GaoSign::Even || order == want;
    }
    GaoRelation g = classify_pair(e, p, c.axis);
    const char letter = g.letter == GaoLetter::G ? 'G' : g.letter == GaoLetter::A ? 'A' : 'O';
    if (c.rel[0] != letter) return false;
    return g.sign == GaoSign::Even || g.sign == want;
}

SceneCheck validate_scene(const Dictionary& grammar, const Scene& scene) {
    std::vector<std::vector<std::vector<ImageConnector>>> options;
    for (const auto& e : scene.entities) {
        const WordEntry* entry = grammar.find(e.type);
        if (!entry) throw DomainError("entity type '" + e.type + "' has no grammar entry");
        std::vector<std::vector<ImageConnector>> ds;
        for (const Disjunct& d : entry->disjuncts) {
            std::vector<ImageConnector> cs;
            for (const auto& c : d.left) cs.push_back(ImageConnector::parse(c));
            for (const auto& c : d.right) cs.push_back(ImageConnector::parse(c));
            ds.push_back(std::move(cs));
        }
        options.push_back(std::move(ds));
    }
    detail::LinkMatcher<ImageConnector> matcher(
        options,
        [&](std::size_t i, const ImageConnector& c, std::size_t j, const ImageConnector& cj) {
            return connectors_pair(scene.entities[i], c, scene.entities[j], cj, grammar);
        },
        [](const ImageConnector& c) { return static_cast<int>(c.axis); });
    SceneCheck out;
    if (auto r = matcher.run()) {
        SceneLinkage l;
        l.disjuncts = r->disjuncts;
        for (const auto& k : r->links) l.links.push_back({k.a, k.b, k.at_a, k.at_b});
        out.linkage = std::move(l);
        return out;
    }
    for (std::size_t i = 0; i < scene.entities.size(); ++i) {
        const SceneEntity& e = scene.entities[i];
        for (std::size_t d = 0; d < options[i].size(); ++d) {
            std::string where = e.id + " (" + e.type + ") disjunct " + std::to_string(d + 1) + ": ";
            auto missing = matcher.hopeless(i, d);
            if (missing.empty()) out.violations.push_back(where + "no joint assignment");
            for (const auto& m : missing) out.violations.push_back(where + m.to_string() + " unsatisfied");
        }
    }
    return out;
}

std::string render_scene_linkage(const Scene& scene, const SceneLinkage& linkage) {
    std::string out;
    for (const auto& l : linkage.links)
        out += scene.entities[l.a].id + " " + l.at_a.to_string() + " -- " + l.at_b.to_string() + " " +
               scene.entities[l.b].id + "\n";
    return out;
}

std::vector<AtomId> scene_to_atoms(const Scene& scene, AtomStore& store) {
    std::vector<AtomId> out;
    std::vector<AtomId> node;
    for (const auto& e : scene.entities) {
        AtomId id = store.intern(AtomKind::ConceptNode, e.id);
        node.push_back(id);
        out.push_back(store.intern(AtomKind::InheritanceLink,
                                   std::vector<AtomId>{id, store.intern(AtomKind::ConceptNode, e.type)}));
    }
    auto eval = [&](const std::string& pred, AtomId a, AtomId b) {
        AtomId list = store.intern(AtomKind::ListLink, std::vector<AtomId>{a, b});
        out.push_back(store.intern(AtomKind::EvaluationLink,
                                   std::vector<AtomId>{store.intern(AtomKind::PredicateNode, pred), list}));
    };
    const auto& es = scene.entities;
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            for (char axis : scene.axes) {
                GaoRelation g = classify_pair(es[i], es[j], axis);
                std::string pred = g.letter == GaoLetter::G ? "gap_" : g.letter == GaoLetter::A ? "abut_" : "overlap_";
                pred += axis;
                if (g.sign == GaoSign::Minus)
                    eval(pred, node[j], node[i]);
                else
                    eval(pred, node[i], node[j]);
            }
            if (scene.axes.find('h') != std::string::npos && scene.axes.find('v') != std::string::npos &&
                classify_boxes(es[i], es[j]) == Rcc8::EC)
                eval("adjacent", node[i], node[j]);
        }
    return out;
}

}  // namespace mg
