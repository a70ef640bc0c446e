#include <doctest.h>

#include <set>

#include "mg/error.hpp"
#include "mg/grounding.hpp"
#include "util.hpp"

using namespace mg;
using testutil::slurp;

namespace {

const Bundle& bundle(const std::string& name) {
    static std::map<std::string, Bundle> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, Bundle::load(std::string(MG_DATA_DIR) + "/bundles/" + name)).first;
    return it->second;
}

std::string data(const std::string& path) { return slurp(std::string(MG_DATA_DIR) + "/" + path); }

std::set<std::string> facts_of(const std::vector<GroundFact>& facts) {
    std::set<std::string> out;
    for (const auto& f : facts) out.insert(f.to_string());
    return out;
}

GroundResult ground_sentence(const std::string& sentence, const Bundle& b) {
    AtomStore s;
    comprehend(sentence, b, s);
    return ground(s, b);
}

// Relation sets named by their own letters, from endpoints alone.
RelationSet gao_oracle(IntInterval a, IntInterval b) {
    if (b.start > a.end || a.start > b.end) return RelationSet::parse(Algebra::Allen, "{before,after}");
    if (b.start == a.end || a.start == b.end) return RelationSet::parse(Algebra::Allen, "{meets,met-by}");
    return RelationSet::parse(Algebra::Allen, "{overlaps,starts,during,finishes,equal,finished-by,contains,started-by,"
                                              "overlapped-by}");
}

std::set<std::string> regrounded(const ChainResult& r, const Bundle& b) {
    std::set<std::string> out;
    for (const auto& g : r.generations) {
        REQUIRE_FALSE(g.candidates.empty());
        auto f = facts_of(ground_sentence(g.candidates[0].sentence, b).facts);
        out.insert(f.begin(), f.end());
    }
    return out;
}

std::set<std::string> sentences(const ChainResult& r) {
    std::set<std::string> out;
    for (const auto& g : r.generations)
        if (!g.candidates.empty()) out.insert(g.candidates[0].sentence);
    return out;
}

}  // namespace

TEST_CASE("phrase inventories of the bundles") {
    auto phrases = [](const Bundle& b, const std::string& frame) {
        std::map<std::uint16_t, int> n;
        for (const auto& r : b.grounding)
            if (r.side == Side::Language && r.frame == frame) ++n[r.relation.bits()];
        return n;
    };
    // one phrase per RCC-8 base relation
    auto rcc = phrases(bundle("minimal-rcc"), "rcc8");
    for (int r = 0; r < 8; ++r) CHECK(rcc[RelationSet::single(Algebra::Rcc8, r).bits()] == 1);
    // every Allen relation and every gap/abut/overlap letter in the extended bundles
    for (const char* name : {"extended-rcc-allen", "basic-movement", "perception-action"}) {
        std::vector<std::string> frames{"allen:h", "allen:v"};
        if (std::string(name) != "extended-rcc-allen") frames.push_back("allen:t");
        for (const auto& frame : frames) {
            auto ps = phrases(bundle(name), frame);
            for (int r = 0; r < 13; ++r) CHECK_MESSAGE(ps[RelationSet::single(Algebra::Allen, r).bits()] >= 1, name, frame);
            for (GaoLetter l : {GaoLetter::G, GaoLetter::A, GaoLetter::O})
                CHECK_MESSAGE(ps[gao_relations(l).bits()] >= 1, name, frame);
        }
        CHECK(bundle(name).qualifiers.at("often") == doctest::Approx(0.7));
        CHECK(bundle(name).qualifiers.at("usually") == doctest::Approx(0.8));
        CHECK(bundle(name).qualifiers.at("occasionally") == doctest::Approx(0.3));
    }
}

TEST_CASE("extended and movement sentences") {
    const auto& ext = bundle("extended-rcc-allen");
    auto eye = ground_sentence("An eye is usually vertically related to a nose with a gap between", ext);
    REQUIRE(eye.facts.size() == 1);
    CHECK(eye.facts[0].to_string() == "allen:v eye nose {before,after}");
    CHECK(eye.facts[0].tv.strength == doctest::Approx(0.8));
    CHECK(eye.unmatched.empty());

    auto semi = ground_sentence("A semicircle is often externally connected with an ascender", ext);
    REQUIRE(semi.facts.size() == 1);
    CHECK(semi.facts[0].to_string() == "rcc8 semicircle ascender {EC}");
    CHECK(semi.facts[0].tv.strength == doctest::Approx(0.7));

    CHECK(facts_of(ground_sentence("An eye is horizontally located before a nose", ext).facts) ==
          std::set<std::string>{"allen:h eye nose {before}"});
    // without an axis the phrase names no relation
    CHECK_THROWS_AS(ground_sentence("An eye is located before a nose", ext), DomainError);

    const auto& mv = bundle("basic-movement");
    auto kick = ground_sentence("Kicking the lower leg forward is often done after moving the lower leg back.", mv);
    REQUIRE(kick.facts.size() == 1);
    CHECK(kick.facts[0].to_string() == "allen:t kick-lower-leg-forward move-lower-leg-back {after}");
    CHECK(kick.facts[0].tv.strength == doctest::Approx(0.7));
    CHECK(facts_of(ground_sentence("Pushing the right foot down is done during moving the left hand in chord D sharp minor",
                                   mv)
                       .facts) == std::set<std::string>{"allen:t push-right-foot-down left-hand-chord {during}"});
}

TEST_CASE("express then generate then ground over every extended phrase") {
    for (const char* name : {"extended-rcc-allen", "basic-movement"}) {
        const auto& b = bundle(name);
        int checked = 0;
        for (const auto& rule : b.grounding) {
            if (rule.side != Side::Language) continue;
            const bool temporal = rule.frame == "allen:t";
            GroundFact f{rule.frame, rule.relation, temporal ? "reach-forward" : "eye",
                         temporal ? "wrist-hand-reach" : "nose", {}, ""};
            AtomStore s;
            express({f}, b, s);
            auto gen = generate(s, b);
            REQUIRE(gen.size() == 1);
            REQUIRE_FALSE(gen[0].candidates.empty());
            const auto& top = gen[0].candidates[0];
            CHECK(aesthetic(top.tokens, gen[0].targets, b));
            auto back = ground_sentence(top.sentence, b);
            REQUIRE(back.facts.size() == 1);
            CHECK_MESSAGE(back.network(f.frame).relation(f.x, f.y) == f.relation, top.sentence);
            ++checked;
        }
        CHECK(checked >= 8 + 2 * 16);
    }
}

TEST_CASE("qualifiers survive the round trip") {
    const auto& b = bundle("extended-rcc-allen");
    for (const auto& [word, strength] : b.qualifiers) {
        GroundFact f{"allen:h", gao_relations(GaoLetter::A), "eye", "eye", {strength, 1.0}, ""};
        AtomStore s;
        express({f}, b, s);
        auto gen = generate(s, b);
        REQUIRE(gen.size() == 1);
        const std::string sentence = gen[0].candidates.at(0).sentence;
        CHECK(sentence.find(word) != std::string::npos);
        auto back = ground_sentence(sentence, b);
        REQUIRE(back.facts.size() == 1);
        CHECK(back.facts[0].tv.strength == doctest::Approx(strength));
        CHECK(back.facts[0].relation == f.relation);
    }
}

TEST_CASE("scene atoms ground to gap, abut and overlap on each axis") {
    const auto& b = bundle("extended-rcc-allen");
    for (const char* file : {"image/face.scene", "image/patterns.scene", "chain/smile-at-bob.scene"}) {
        auto scene = Scene::parse(data(file));
        AtomStore s;
        scene_to_atoms(scene, s);
        auto g = ground(s, b, Side::Perception);
        CHECK(g.unmatched.empty());
        const auto& es = scene.entities;
        for (std::size_t i = 0; i < es.size(); ++i)
            for (std::size_t j = i + 1; j < es.size(); ++j)
                for (char axis : scene.axes) {
                    auto net = g.network(std::string("allen:") + axis);
                    CHECK(net.relation(es[i].id, es[j].id) == gao_oracle(es[i].extent.at(axis), es[j].extent.at(axis)));
                }
    }
    AtomStore p;
    scene_to_atoms(Scene::parse(data("image/patterns.scene")), p);
    CHECK(ground(p, b, Side::Perception).network("rcc8").relation("p2", "p7") == RelationSet::single(Algebra::Rcc8, 1));
}

TEST_CASE("the face scene chains to extended English") {
    const auto& b = bundle("perception-action");
    auto scene = Scene::parse(data("image/face.scene"));
    auto r = chain(&scene, nullptr, b);
    CHECK(facts_of(r.facts) == std::set<std::string>{"allen:h eye eye {before,after}", "allen:h eye nose {before,after}",
                                                     "allen:v eye nose {before,after}",
                                                     "allen:v eye eye {overlaps,starts,during,finishes,equal,"
                                                     "finished-by,contains,started-by,overlapped-by}"});
    CHECK(sentences(r).count("An eye is vertically related to a nose with a gap between"));
    CHECK(regrounded(r, b) == facts_of(r.facts));
}

TEST_CASE("movement traces chain to movement English") {
    const auto& b = bundle("basic-movement");
    auto gapped = MovementTrace::parse(data("action/kick-gapped.trace"));
    auto r = chain(nullptr, &gapped, b);
    CHECK(sentences(r) == std::set<std::string>{"Moving the lower leg back is done before kicking the lower leg forward"});
    CHECK(regrounded(r, b) == facts_of(r.facts));
    auto kick = MovementTrace::parse(data("action/kick.trace"));
    CHECK(sentences(chain(nullptr, &kick, b)) ==
          std::set<std::string>{"Moving the lower leg back is done right before kicking the lower leg forward"});

    // the action side reads every instance pair of a trace
    auto piano = MovementTrace::parse("a reach-forward [0,10]\nb shoulder-elbow-reach [0,6]\nc wrist-hand-reach [4,10]\n");
    AtomStore s;
    trace_to_atoms(piano, s);
    auto g = ground(s, b, Side::Action);
    CHECK(g.facts.size() == 3);
    CHECK(g.network("allen:t").relation("reach-forward", "wrist-hand-reach") ==
          RelationSet::parse(Algebra::Allen, "{finished-by}"));
    CHECK(sentences(chain(nullptr, &piano, b)).size() == 3);
}

TEST_CASE("smile at Bob: perception and action chained to language") {
    const auto& b = bundle("perception-action");
    auto scene = Scene::parse(data("chain/smile-at-bob.scene"));
    auto trace = MovementTrace::parse(data("chain/smile-at-bob.trace"));
    auto r = chain(&scene, &trace, b);
    REQUIRE(r.facts.size() == 3);
    CHECK(r.generations.size() == 3);
    CHECK(sentences(r).count("Looking at Bob is done throughout smiling"));
    CHECK(sentences(r).count("A head is horizontally related to Bob with a gap between"));
    CHECK(regrounded(r, b) == facts_of(r.facts));

    Scene empty;
    CHECK(chain(&empty, nullptr, b).generations.empty());
    CHECK(chain(nullptr, nullptr, b).facts.empty());
}
