#include "mg/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "mg/action_grammar.hpp"
#include "mg/error.hpp"
#include "mg/grounding.hpp"
#include "mg/image_grammar.hpp"
#include "mg/sexpr.hpp"

namespace mg {

namespace {

namespace fs = std::filesystem;

// I/O trouble, reported with exit code 2.
struct IoError : Error {
    using Error::Error;
};

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream s;
        s << std::cin.rdbuf();
        return s.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct BundleFlags {
    std::string bundle;
    std::string dict;
    std::string rules;
    std::string grounding;
};

void add_bundle_flags(CLI::App* app, BundleFlags& f) {
    app->add_option("--bundle", f.bundle, "Bundle name or directory");
    app->add_option("--dict", f.dict, "Dictionary file (or bundle name)");
    app->add_option("--rules", f.rules, "Mapping rules file");
    app->add_option("--grounding", f.grounding, "Grounding rules file");
}

Bundle load_bundle(const BundleFlags& f, const std::string& data) {
    const fs::path root = data_root(data.empty() ? std::nullopt : std::optional<std::string>(data));
    if (!f.bundle.empty()) return Bundle::load(resolve_bundle(f.bundle, root));
    if (f.dict.empty()) throw CLI::RequiredError("--bundle or --dict");
    if (!fs::is_regular_file(f.dict)) {
        Bundle b = Bundle::load(resolve_bundle(f.dict, root));
        if (!f.rules.empty()) b.rules = RuleBase::load(read_input(f.rules));
        if (!f.grounding.empty()) b.grounding = Bundle::parse_grounding(read_input(f.grounding), &b.qualifiers);
        return b;
    }
    Bundle b;
    b.name = fs::path(f.dict).stem().string();
    b.dict = Dictionary::load(read_input(f.dict));
    if (!f.rules.empty()) b.rules = RuleBase::load(read_input(f.rules));
    if (!f.grounding.empty()) b.grounding = Bundle::parse_grounding(read_input(f.grounding), &b.qualifiers);
    return b;
}

Side parse_side(const std::string& s) {
    if (s == "language") return Side::Language;
    if (s == "perception") return Side::Perception;
    if (s == "action") return Side::Action;
    throw CLI::ValidationError("--side", "expected language, perception or action");
}

std::string fact_line(const GroundFact& f, const std::string& format) {
    if (format == "tsv") {
        std::ostringstream s;
        s << f.frame << '\t' << f.x << '\t' << f.y << '\t' << f.relation.to_string() << '\t' << f.tv.strength;
        return s.str();
    }
    if (format == "sexpr")
        return "(fact " + f.frame + " " + quote(f.x) + " " + quote(f.y) + " " + f.relation.to_string() + ")";
    std::string line = f.to_string();
    if (f.tv.strength != 1.0) {
        std::ostringstream s;
        s << " " << f.tv.strength;
        line += s.str();
    }
    return line;
}

// Lines `FRAME X Y {R,...} [STRENGTH]`, as printed by `ground`.
std::vector<GroundFact> parse_facts(const std::string& text) {
    std::vector<GroundFact> out;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        GroundFact f;
        if (!(ls >> f.frame)) continue;
        std::string rel;
        if (!(ls >> f.x >> f.y >> rel)) throw ParseError("expected FRAME X Y {R,...}", n, 1);
        f.relation = RelationSet::parse(frame_algebra(f.frame), rel);
        double strength = 1.0;
        if (ls >> strength) f.tv.strength = strength;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<std::string> corpus_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(b, e - b + 1));
    }
    return out;
}

std::set<std::string> fact_set(const std::vector<GroundFact>& facts) {
    std::set<std::string> out;
    for (const auto& f : facts) out.insert(f.to_string());
    return out;
}

void print_generations(const std::vector<GroupGeneration>& gens, std::size_t top, std::ostream& out) {
    for (const auto& g : gens)
        for (std::size_t i = 0; i < g.candidates.size() && i < top; ++i) out << g.candidates[i].sentence << "\n";
}

std::string composition_table(Algebra a) {
    const int n = base_count(a);
    std::string out = "compose";
    for (int c = 0; c < n; ++c) out += "\t" + std::string(base_name(a, c));
    out += "\n";
    for (int r = 0; r < n; ++r) {
        out += base_name(a, r);
        for (int c = 0; c < n; ++c) out += "\t" + compose(a, r, c).to_string();
        out += "\n";
    }
    return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Language, logic, perception and action grounding tools", "mg"};
    app.require_subcommand(1);
    std::string data;
    app.add_option("--data", data, "Data directory (overrides MG_DATA)");

    BundleFlags bf;
    std::string sentence, format = "text", side = "language", atoms_file, facts_file, corpus, grammar_file, scene_file,
                          trace_file, network_file, algebra_name;
    std::size_t top = 1;
    bool all = false, show_facts = false, show_atoms = false, walls = true, no_cross = false;

    auto sentence_cmd = [&](const char* name, const char* help) {
        auto* c = app.add_subcommand(name, help);
        add_bundle_flags(c, bf);
        c->add_option("--sentence,-s", sentence, "Sentence")->required();
        return c;
    };
    auto* parse_cmd = sentence_cmd("parse", "Link-grammar linkage of a sentence");
    parse_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "sexpr", "tsv"}));
    parse_cmd->add_flag("--all", all, "Every linkage, best first");
    parse_cmd->add_flag("--walls,!--no-walls", walls, "Use LEFT-WALL when the dictionary has one (default on)");
    auto* relex_cmd = sentence_cmd("relex", "Dependency relations and attributes");
    auto* logic_cmd = sentence_cmd("logic", "Atoms produced by the mapping rules");
    auto* comprehend_cmd = sentence_cmd("comprehend", "Normalized atoms of a sentence");

    auto* ground_cmd = app.add_subcommand("ground", "Qualitative relations grounded from atoms");
    add_bundle_flags(ground_cmd, bf);
    ground_cmd->add_option("--sentence,-s", sentence, "Sentence to comprehend first");
    ground_cmd->add_option("--atoms", atoms_file, "Atom file ('-' for stdin)");
    ground_cmd->add_option("--side", side)->check(CLI::IsMember({"language", "perception", "action"}));
    ground_cmd->add_option("--format", format)->check(CLI::IsMember({"text", "sexpr", "tsv"}));

    auto* express_cmd = app.add_subcommand("express", "Canonical atoms for relations");
    add_bundle_flags(express_cmd, bf);
    express_cmd->add_option("--facts", facts_file, "Relations as printed by ground ('-' for stdin)")->required();

    auto* generate_cmd = app.add_subcommand("generate", "Sentences expressing atoms");
    add_bundle_flags(generate_cmd, bf);
    generate_cmd->add_option("--atoms", atoms_file, "Atom file ('-' for stdin)");
    generate_cmd->add_option("--facts", facts_file, "Relations to express first");
    generate_cmd->add_option("--sentence,-s", sentence, "Sentence to comprehend first");
    generate_cmd->add_option("--top", top, "Candidates per sentence group");

    auto* roundtrip_cmd = app.add_subcommand("roundtrip", "Comprehend, ground, generate and ground again");
    add_bundle_flags(roundtrip_cmd, bf);
    roundtrip_cmd->add_option("--corpus", corpus, "One sentence per line")->required();

    auto* scene_cmd = app.add_subcommand("scene-check", "Validate a scene against an image grammar");
    scene_cmd->add_option("--grammar", grammar_file)->required();
    scene_cmd->add_option("--scene", scene_file)->required();
    scene_cmd->add_flag("--emit-atoms,--atoms", show_atoms, "Also print the scene atoms");

    auto* action_cmd = app.add_subcommand("action-check", "Validate a movement trace against an action grammar");
    action_cmd->add_option("--grammar", grammar_file)->required();
    action_cmd->add_option("--trace", trace_file)->required();
    action_cmd->add_flag("--emit-atoms,--atoms", show_atoms, "Also print the trace atoms");
    action_cmd->add_flag("--no-cross", no_cross, "Also require non-crossing dependency links");

    auto* reason_cmd = app.add_subcommand("reason", "Path consistency of a constraint network");
    reason_cmd->add_option("--net,--network", network_file)->required();
    reason_cmd->add_option("--algebra", algebra_name)->check(CLI::IsMember({"rcc8", "allen"}));

    auto* tables_cmd = app.add_subcommand("tables", "Composition table as TSV");
    tables_cmd->add_option("--algebra", algebra_name)->required()->check(CLI::IsMember({"rcc8", "allen"}));

    auto* chain_cmd = app.add_subcommand("chain", "Scene and trace to sentences");
    add_bundle_flags(chain_cmd, bf);
    chain_cmd->add_option("--scene", scene_file);
    chain_cmd->add_option("--trace", trace_file);
    chain_cmd->add_flag("--facts", show_facts, "Also print the lifted relations");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        auto bundle = [&] { return load_bundle(bf, data); };
        if (*parse_cmd) {
            Bundle b = bundle();
            ParseResult r = parse(b.dict.tokenize(sentence), b.dict, ParseOptions{walls});
            if (r.linkages.empty()) throw DomainError("no parse for '" + sentence + "'");
            const std::size_t n = all ? r.linkages.size() : 1;
            for (std::size_t i = 0; i < n; ++i) {
                const Linkage& l = r.linkages[i];
                if (format == "tsv") {
                    for (const auto& k : l.links) out << i << '\t' << k.left << '\t' << k.right << '\t' << k.label << '\t'
                                                      << l.words[k.left] << '\t' << l.words[k.right] << "\n";
                } else if (format == "sexpr") {
                    out << "(linkage\n" << render_links(l) << ")\n";
                } else {
                    out << render_arcs(l) << render_links(l);
                    if (i + 1 < n) out << "\n";
                }
            }
            if (!all && r.linkages.size() > 1) err << r.linkages.size() << " linkages; showing the best\n";
        } else if (*relex_cmd) {
            Bundle b = bundle();
            ParseResult r = parse(b.dict.tokenize(sentence), b.dict);
            if (r.linkages.empty()) throw DomainError("no parse for '" + sentence + "'");
            out << extract(r.linkages[0], b.dict).report();
        } else if (*logic_cmd) {
            Bundle b = bundle();
            ParseResult r = parse(b.dict.tokenize(sentence), b.dict);
            if (r.linkages.empty()) throw DomainError("no parse for '" + sentence + "'");
            AtomStore s;
            apply(b.rules, extract(r.linkages[0], b.dict), b.dict, s);
            out << s.to_text();
        } else if (*comprehend_cmd) {
            Bundle b = bundle();
            AtomStore s;
            auto c = comprehend(sentence, b, s);
            if (c.alternatives > 1) err << c.alternatives << " linkages; comprehending the best\n";
            out << s.to_text();
        } else if (*ground_cmd) {
            Bundle b = bundle();
            AtomStore s;
            if (!sentence.empty())
                comprehend(sentence, b, s);
            else if (!atoms_file.empty())
                s = AtomStore::from_text(read_input(atoms_file));
            else
                throw CLI::RequiredError("--sentence or --atoms");
            auto r = ground(s, b, parse_side(side));
            for (const auto& f : r.facts) out << fact_line(f, format) << "\n";
            for (const auto& u : r.unmatched) err << "unmatched: " << u << "\n";
        } else if (*express_cmd) {
            Bundle b = bundle();
            AtomStore s;
            express(parse_facts(read_input(facts_file)), b, s);
            out << s.to_text();
        } else if (*generate_cmd) {
            Bundle b = bundle();
            AtomStore s;
            if (!sentence.empty())
                comprehend(sentence, b, s);
            else if (!facts_file.empty())
                express(parse_facts(read_input(facts_file)), b, s);
            else if (!atoms_file.empty())
                s = AtomStore::from_text(read_input(atoms_file));
            else
                throw CLI::RequiredError("--atoms, --facts or --sentence");
            print_generations(generate(s, b), std::max<std::size_t>(top, 1), out);
        } else if (*roundtrip_cmd) {
            Bundle b = bundle();
            int ok = 0, total = 0;
            for (const auto& line : corpus_lines(read_input(corpus))) {
                ++total;
                AtomStore s;
                comprehend(line, b, s);
                auto original = fact_set(ground(s, b).facts);
                std::set<std::string> again;
                std::vector<std::string> said;
                for (const auto& g : generate(s, b)) {
                    if (g.candidates.empty()) continue;
                    said.push_back(g.candidates[0].sentence);
                    AtomStore t;
                    comprehend(g.candidates[0].sentence, b, t);
                    auto f = fact_set(ground(t, b).facts);
                    again.insert(f.begin(), f.end());
                }
                const bool same = !original.empty() && original == again;
                ok += same;
                out << (same ? "ok" : "FAIL") << '\t' << line << '\t';
                for (std::size_t i = 0; i < said.size(); ++i) out << (i ? " | " : "") << said[i];
                out << "\n";
            }
            out << ok << "/" << total << " round trips preserved the grounding\n";
            if (ok != total) return 1;
        } else if (*scene_cmd) {
            auto grammar = Dictionary::load(read_input(grammar_file));
            auto scene = Scene::parse(read_input(scene_file));
            auto check = validate_scene(grammar, scene);
            if (show_atoms) {
                AtomStore s;
                scene_to_atoms(scene, s);
                out << s.to_text();
            }
            if (!check.ok()) {
                for (const auto& v : check.violations) out << "violation: " << v << "\n";
                return 1;
            }
            out << "ok\n" << render_scene_linkage(scene, *check.linkage);
        } else if (*action_cmd) {
            auto grammar = ActionGrammar::load(read_input(grammar_file));
            auto trace = MovementTrace::parse(read_input(trace_file));
            auto check = validate_movement(grammar, trace);
            auto hierarchy = check_hierarchy(grammar, trace);
            const bool planar = !no_cross || check_no_cross(trace);
            if (show_atoms) {
                AtomStore s;
                trace_to_atoms(trace, s);
                out << s.to_text();
            }
            for (const auto& v : check.violations) out << "violation: " << v << "\n";
            if (check.links)
                for (const auto& l : *check.links)
                    out << "link: " << trace.instances[l.a].id << " " << l.at_a.to_string() << " -- "
                        << l.at_b.to_string() << " " << trace.instances[l.b].id << "\n";
            for (const auto& h : hierarchy) out << "hierarchy: " << h << "\n";
            if (no_cross) out << "no-cross: " << (planar ? "ok" : "crossing") << "\n";
            const bool good = check.ok() && hierarchy.empty() && planar;
            out << (good ? "ok" : "rejected") << "\n";
            if (!good) return 1;
        } else if (*reason_cmd) {
            std::optional<Algebra> a;
            if (!algebra_name.empty()) a = parse_algebra(algebra_name);
            auto net = ConstraintNetwork::from_text(read_input(network_file), a);
            auto closed = path_consistency(net);
            if (!closed) {
                out << "INCONSISTENT\n";
                return 1;
            }
            out << closed->to_text();
        } else if (*tables_cmd) {
            out << composition_table(*parse_algebra(algebra_name));
        } else if (*chain_cmd) {
            Bundle b = bf.bundle.empty() && bf.dict.empty()
                           ? Bundle::load(resolve_bundle("perception-action", data_root(
                                 data.empty() ? std::nullopt : std::optional<std::string>(data))))
                           : bundle();
            std::optional<Scene> scene;
            std::optional<MovementTrace> trace;
            if (!scene_file.empty()) scene = Scene::parse(read_input(scene_file));
            if (!trace_file.empty()) trace = MovementTrace::parse(read_input(trace_file));
            if (!scene && !trace) throw CLI::RequiredError("--scene or --trace");
            auto r = chain(scene ? &*scene : nullptr, trace ? &*trace : nullptr, b);
            if (show_facts)
                for (const auto& f : r.facts) out << "# " << fact_line(f, "text") << "\n";
            print_generations(r.generations, 1, out);
        }
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace mg
