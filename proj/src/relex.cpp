#include "mg/relex.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace mg {

namespace {

std::string head_of(const std::string& label) {
    std::size_t n = 0;
    while (n < label.size() && std::isupper(static_cast<unsigned char>(label[n]))) ++n;
    return label.substr(0, n);
}

std::string sub_of(const std::string& label) { return label.substr(head_of(label).size()); }

std::string pos_from_subscript(const std::string& sub) {
    if (sub.size() < 2) return "";
    switch (sub[1]) {
        case 'n': case 'b': case 'f': case 'm': case 's': case 'p': return "noun";
        case 'v': return "verb";
        case 'e': case 'r': return "adv";
        case 'd': return "det";
        default: return "";
    }
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

const std::set<std::string> kStructural{"Wd", "WV", "Xp", "Xc", "Xca", "CC", "CJ", "RW"};

}  // namespace

DepGraph extract(const Linkage& linkage, const Dictionary& dict) {
    DepGraph g;
    const std::size_t n = linkage.tokens.size();
    for (std::size_t i = 0; i < n; ++i) {
        DepToken t;
        t.index = i;
        t.surface = linkage.tokens[i];
        t.lemma = dict.lemma(t.surface);
        if (const WordEntry* e = dict.lookup(t.surface)) t.subscript = e->subscript;
        t.pos = pos_from_subscript(t.subscript);
        if (t.surface == "." || t.surface == ",") t.pos = "punctuation";
        t.proper = dict.is_proper(t.surface);
        t.plural = dict.is_plural(t.surface);
        t.gender = dict.gender(t.surface);
        g.tokens.push_back(std::move(t));
    }
    auto& tok = g.tokens;

    std::map<std::size_t, std::size_t> copula_subject;  // copula -> surface subject
    std::map<std::size_t, std::size_t> copula_pred;     // copula -> predicate word
    std::set<std::size_t> passive;                      // passive predicates
    std::map<std::size_t, std::size_t> object_of_prep;  // preposition -> its J object
    std::vector<std::pair<std::size_t, std::size_t>> prep_links;  // (head, preposition)
    std::set<std::size_t> definite, absorbed;
    std::set<DepRelation> rels;

    auto copula = [&](std::size_t i) { return dict.is_copula(tok[i].surface); };

    for (const Link& l : linkage.links) {
        const std::string h = head_of(l.label);
        const std::string sub = sub_of(l.label);
        if (kStructural.count(l.label) || kStructural.count(h)) continue;
        if (h == "S") {
            if (copula(l.right))
                copula_subject[l.right] = l.left;
            else
                rels.insert({"_subj", l.right, l.left});
        } else if (h == "O") {
            if (copula(l.left))
                copula_pred[l.left] = l.right;
            else
                rels.insert({"_obj", l.left, l.right});
        } else if (h == "P") {
            copula_pred[l.left] = l.right;
            if (sub.starts_with("v")) passive.insert(l.right);
        } else if (h == "E") {
            rels.insert({"_advmod", l.right, l.left});
        } else if (h == "MV" && sub.starts_with("a")) {
            rels.insert({"_advmod", l.left, l.right});
        } else if (h == "MV" || h == "M") {
            prep_links.push_back({l.left, l.right});
        } else if (h == "J") {
            object_of_prep[l.left] = l.right;
        } else if (h == "D") {
            if (lower(tok[l.left].surface) == "the") definite.insert(l.right);
        } else if (h == "NM") {
            tok[l.left].number = tok[l.right].surface;
            tok[l.left].lemma = lower(tok[l.left].lemma) + "-" + tok[l.right].surface;
            absorbed.insert(l.right);
        } else if (h == "N") {
            // resolved below, once copula frames are known
        } else {
            g.unhandled.push_back(l.label);
        }
    }

    // Copula frames: the predicate word heads the clause.
    std::map<std::size_t, std::size_t> frame_copula;  // predicate -> copula
    for (auto [cop, pred] : copula_pred) {
        frame_copula[pred] = cop;
        if (auto s = copula_subject.find(cop); s != copula_subject.end())
            rels.insert({passive.count(pred) ? "_obj" : "_subj", pred, s->second});
    }
    for (auto [cop, subj] : copula_subject)
        if (!copula_pred.count(cop)) rels.insert({"_subj", cop, subj});
    for (auto [head, prep] : prep_links) {
        auto obj = object_of_prep.find(prep);
        if (obj == object_of_prep.end()) {
            g.unhandled.push_back("MVp");
            continue;
        }
        if (lower(tok[prep].surface) == "by" && passive.count(head)) {
            rels.insert({"_subj", head, obj->second});
        } else {
            rels.insert({"_obj", head, obj->second});
            if (dict.is_relprep(tok[prep].surface)) rels.insert({"_advmod", head, prep});
        }
    }
    for (const Link& l : linkage.links)
        if (head_of(l.label) == "N") {
            std::size_t target = copula_pred.count(l.left) ? copula_pred[l.left] : l.left;
            rels.insert({"_advmod", target, l.right});
        }

    g.relations.assign(rels.begin(), rels.end());

    std::set<std::size_t> heads;
    for (const auto& r : g.relations) heads.insert(r.head);
    std::set<Attribute> attrs;
    for (auto& t : tok) {
        if (absorbed.count(t.index)) continue;
        if (copula(t.index) && copula_pred.count(t.index)) continue;
        if (heads.count(t.index)) t.pos = "verb";
        if (t.pos.empty()) continue;
        attrs.insert({"pos", t.index, t.pos});
        if (t.pos == "verb") {
            std::string sub = t.subscript;
            if (auto c = frame_copula.find(t.index); c != frame_copula.end()) sub = tok[c->second].subscript;
            if (sub.starts_with(".v-d"))
                attrs.insert({"tense", t.index, "past"});
            else
                attrs.insert({"tense", t.index, "present"});
        }
        if (t.pos == "noun") {
            attrs.insert({"noun_number", t.index, t.plural ? "plural" : "singular"});
            if (t.proper || definite.count(t.index)) attrs.insert({"definite-FLAG", t.index, "T"});
            if (t.gender) attrs.insert({"gender", t.index, *t.gender});
        }
    }
    g.attributes.assign(attrs.begin(), attrs.end());
    return g;
}

std::vector<std::string> DepGraph::relation_strings() const {
    std::vector<std::string> out;
    for (const auto& r : relations) out.push_back(r.name + "(" + tokens[r.head].lemma + ", " + tokens[r.dep].lemma + ")");
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> DepGraph::attribute_strings() const {
    std::vector<std::string> out;
    for (const auto& a : attributes) out.push_back(a.name + "(" + tokens[a.token].lemma + ", " + a.value + ")");
    std::sort(out.begin(), out.end());
    return out;
}

std::string DepGraph::report() const {
    std::string out = "Dependency relations:\n\n";
    for (const auto& s : relation_strings()) out += "    " + s + "\n";
    out += "\nAttributes:\n\n";
    for (const auto& s : attribute_strings()) out += "    " + s + "\n";
    if (!unhandled.empty()) {
        out += "\nUnhandled links:\n\n";
        for (const auto& s : unhandled) out += "    " + s + "\n";
    }
    return out;
}

}  // namespace mg
