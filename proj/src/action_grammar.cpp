#include "mg/action_grammar.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "link_matching.hpp"
#include "mg/error.hpp"

namespace mg {

namespace {

bool is_letter(const std::string& rel) { return rel == "g" || rel == "a" || rel == "o"; }

std::pair<double, double> parse_box(const std::string& text) {
    static const std::regex form("\\[(-?[0-9.]+),(-?[0-9.]+)\\]");
    std::smatch m;
    if (!std::regex_match(text, m, form)) throw Error("bad parameter range '" + text + "'");
    double lo = std::stod(m[1].str()), hi = std::stod(m[2].str());
    if (lo > hi) throw Error("empty parameter range '" + text + "'");
    return {lo, hi};
}

std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

}  // namespace

ActionConnector ActionConnector::parse(const Connector& c) {
    auto us = c.label.rfind('_');
    if (us == std::string::npos || us == 0 || us + 1 == c.label.size())
        throw Error("bad action connector '" + c.to_string() + "'");
    ActionConnector ac{c.label.substr(0, us), c.label.substr(us + 1), c.dir};
    if (!is_letter(ac.rel)) {
        auto r = parse_base(Algebra::Allen, ac.rel);
        if (!r) throw Error("bad relation in action connector '" + c.to_string() + "'");
        ac.rel = std::string(base_name(Algebra::Allen, *r));
    }
    return ac;
}

ActionGrammar ActionGrammar::load(std::string_view text) {
    ActionGrammar g;
    g.dict = Dictionary::load(text);
    for (const auto& args : g.dict.annotations("animation")) {
        if (args.size() < 2) throw Error("#animation needs a name and an actuator list");
        AnimationType t;
        t.name = args[0];
        std::istringstream acts(args[1]);
        for (std::string a; std::getline(acts, a, ',');)
            if (!a.empty()) t.actuators.insert(a);
        for (std::size_t i = 2; i < args.size(); ++i) t.param_box.push_back(parse_box(args[i]));
        if (!g.types.emplace(t.name, t).second) throw Error("animation '" + t.name + "' declared twice");
    }
    return g;
}

MovementTrace MovementTrace::parse(std::string_view text) {
    MovementTrace t;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    static const std::regex span("\\[(-?[0-9]+),(-?[0-9]+)\\]");
    static const std::regex number("-?[0-9]+(\\.[0-9]*)?");
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) continue;
        if (first == "link") {
            std::string a, b, extra;
            if (!(fields >> a >> b) || (fields >> extra)) throw ParseError("link needs two ids", line_no, 1);
            t.links.emplace_back(a, b);
            continue;
        }
        AnimationInstance inst;
        inst.id = first;
        std::string iv;
        if (!(fields >> inst.type >> iv)) throw ParseError("instance '" + first + "' needs a type and an interval", line_no, 1);
        std::smatch m;
        if (!std::regex_match(iv, m, span)) throw ParseError("bad interval '" + iv + "'", line_no, 1);
        inst.interval = {std::stoi(m[1].str()), std::stoi(m[2].str())};
        if (inst.interval.start >= inst.interval.end) throw ParseError("degenerate interval '" + iv + "'", line_no, 1);
        for (std::string f; fields >> f;) {
            if (std::regex_match(f, number)) {
                if (inst.parent) throw ParseError("parameter after parent in '" + first + "'", line_no, 1);
                inst.params.push_back(std::stod(f));
            } else if (!inst.parent) {
                inst.parent = f;
            } else {
                throw ParseError("unexpected field '" + f + "'", line_no, 1);
            }
        }
        if (t.index_of(inst.id)) throw ParseError("duplicate instance id '" + inst.id + "'", line_no, 1);
        t.instances.push_back(std::move(inst));
    }
    for (const auto& inst : t.instances)
        if (inst.parent && !t.index_of(*inst.parent)) throw Error("unknown parent '" + *inst.parent + "'");
    for (const auto& [a, b] : t.links)
        if (!t.index_of(a) || !t.index_of(b)) throw Error("link names an unknown instance: " + a + " " + b);
    return t;
}

std::optional<std::size_t> MovementTrace::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < instances.size(); ++i)
        if (instances[i].id == id) return i;
    return std::nullopt;
}

bool action_connectors_pair(const AnimationInstance& e, const ActionConnector& c, const AnimationInstance& p,
                            const ActionConnector& cp) {
    if (c.rel != cp.rel || c.sign == cp.sign) return false;
    if (c.animation != p.type || cp.animation != e.type) return false;
    const Allen r = allen_classify(e.interval, p.interval);
    if (is_letter(c.rel)) {
        GaoRelation g = coarsen_to_gao(r);
        const char letter = g.letter == GaoLetter::G ? 'g' : g.letter == GaoLetter::A ? 'a' : 'o';
        if (c.rel[0] != letter) return false;
        const GaoSign want = c.sign == '+' ? GaoSign::Plus : GaoSign::Minus;
        return g.sign == GaoSign::Even || g.sign == want;
    }
    const std::string_view seen = c.sign == '+' ? name(r) : name(allen_classify(p.interval, e.interval));
    return seen == c.rel;
}

MovementCheck validate_movement(const ActionGrammar& grammar, const MovementTrace& trace) {
    MovementCheck out;
    std::vector<std::vector<std::vector<ActionConnector>>> options;
    for (const auto& inst : trace.instances) {
        const WordEntry* entry = grammar.dict.find(inst.type);
        if (!entry) throw DomainError("animation type '" + inst.type + "' has no grammar entry");
        std::vector<std::vector<ActionConnector>> ds;
        for (const Disjunct& d : entry->disjuncts) {
            std::vector<ActionConnector> cs;
            for (const auto& c : d.left) cs.push_back(ActionConnector::parse(c));
            for (const auto& c : d.right) cs.push_back(ActionConnector::parse(c));
            ds.push_back(std::move(cs));
        }
        options.push_back(std::move(ds));
        auto t = grammar.types.find(inst.type);
        if (t == grammar.types.end()) continue;
        const auto& box = t->second.param_box;
        if (inst.params.size() != box.size()) {
            out.violations.push_back(inst.id + " (" + inst.type + "): " + std::to_string(inst.params.size()) +
                                     " parameters, expected " + std::to_string(box.size()));
            continue;
        }
        for (std::size_t k = 0; k < box.size(); ++k)
            if (inst.params[k] < box[k].first || inst.params[k] > box[k].second)
                out.violations.push_back(inst.id + " (" + inst.type + "): parameter " + std::to_string(k + 1) + " = " +
                                         fmt(inst.params[k]) + " outside [" + fmt(box[k].first) + "," +
                                         fmt(box[k].second) + "]");
    }
    detail::LinkMatcher<ActionConnector> matcher(
        options,
        [&](std::size_t i, const ActionConnector& c, std::size_t j, const ActionConnector& cj) {
            return action_connectors_pair(trace.instances[i], c, trace.instances[j], cj);
        },
        [](const ActionConnector&) { return 0; });
    if (auto r = matcher.run()) {
        std::vector<TraceLink> links;
        for (const auto& k : r->links) links.push_back({k.a, k.b, k.at_a, k.at_b});
        out.links = std::move(links);
        out.disjuncts = r->disjuncts;
        return out;
    }
    for (std::size_t i = 0; i < trace.instances.size(); ++i) {
        const auto& inst = trace.instances[i];
        for (std::size_t d = 0; d < options[i].size(); ++d) {
            std::string where = inst.id + " (" + inst.type + ") disjunct " + std::to_string(d + 1) + ": ";
            auto missing = matcher.hopeless(i, d);
            if (missing.empty()) out.violations.push_back(where + "no joint assignment");
            for (const auto& m : missing) out.violations.push_back(where + m.to_string() + " unsatisfied");
        }
    }
    return out;
}

std::vector<std::string> check_hierarchy(const ActionGrammar& grammar, const MovementTrace& trace) {
    std::vector<std::string> out;
    auto actuators = [&](const AnimationInstance& i) -> const std::set<std::string>* {
        auto t = grammar.types.find(i.type);
        return t == grammar.types.end() ? nullptr : &t->second.actuators;
    };
    for (const auto& child : trace.instances) {
        if (!child.parent) continue;
        const AnimationInstance& parent = trace.instances[*trace.index_of(*child.parent)];
        const auto* ca = actuators(child);
        const auto* pa = actuators(parent);
        if (!ca || !pa) {
            out.push_back(child.id + ": no actuator declaration for " + (!ca ? child.type : parent.type));
        } else if (!std::includes(pa->begin(), pa->end(), ca->begin(), ca->end())) {
            out.push_back(child.id + ": actuators not a subset of " + parent.id + "'s");
        }
        Allen r = allen_classify(child.interval, parent.interval);
        if (r != Allen::During && r != Allen::Starts && r != Allen::Finishes && r != Allen::Equal)
            out.push_back(child.id + ": interval not within " + parent.id + " (" + std::string(name(r)) + ")");
    }
    return out;
}

std::vector<std::size_t> trace_order(const MovementTrace& trace) {
    std::vector<std::size_t> idx(trace.instances.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = trace.instances[a];
        const auto& y = trace.instances[b];
        return std::tie(x.interval.start, x.id) < std::tie(y.interval.start, y.id);
    });
    std::vector<std::size_t> pos(idx.size());
    for (std::size_t p = 0; p < idx.size(); ++p) pos[idx[p]] = p;
    return pos;
}

std::vector<std::pair<std::size_t, std::size_t>> dependency_links(const MovementTrace& trace) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < trace.instances.size(); ++i)
        if (trace.instances[i].parent) out.emplace_back(*trace.index_of(*trace.instances[i].parent), i);
    for (const auto& [a, b] : trace.links) out.emplace_back(*trace.index_of(a), *trace.index_of(b));
    return out;
}

bool check_no_cross(const MovementTrace& trace, const std::vector<std::pair<std::size_t, std::size_t>>& links) {
    auto pos = trace_order(trace);
    std::vector<std::pair<std::size_t, std::size_t>> ordered;
    for (auto [a, b] : links) ordered.emplace_back(std::min(pos[a], pos[b]), std::max(pos[a], pos[b]));
    return links_planar(ordered);
}

bool check_no_cross(const MovementTrace& trace) { return check_no_cross(trace, dependency_links(trace)); }

std::vector<AtomId> trace_to_atoms(const MovementTrace& trace, AtomStore& store) {
    std::vector<AtomId> out;
    std::vector<AtomId> node;
    std::map<std::string, int> seen;
    for (const auto& inst : trace.instances) {
        AtomId id = store.intern(AtomKind::ConceptNode, inst.type + "@" + std::to_string(++seen[inst.type]));
        node.push_back(id);
        out.push_back(store.intern(AtomKind::InheritanceLink,
                                   std::vector<AtomId>{id, store.intern(AtomKind::ConceptNode, inst.type)}));
    }
    auto pos = trace_order(trace);
    std::vector<std::size_t> by_pos(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) by_pos[pos[i]] = i;
    for (std::size_t p = 0; p < by_pos.size(); ++p)
        for (std::size_t q = p + 1; q < by_pos.size(); ++q) {
            std::size_t i = by_pos[p], j = by_pos[q];
            Allen r = allen_classify(trace.instances[i].interval, trace.instances[j].interval);
            AtomId list = store.intern(AtomKind::ListLink, std::vector<AtomId>{node[i], node[j]});
            out.push_back(store.intern(
                AtomKind::EvaluationLink,
                std::vector<AtomId>{store.intern(AtomKind::PredicateNode, std::string(name(r))), list}));
        }
    return out;
}

}  // namespace mg
