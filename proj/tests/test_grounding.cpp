#include <doctest.h>

#include <chrono>
#include <set>

#include "mg/error.hpp"
#include "mg/grounding.hpp"

using namespace mg;

namespace {

const Bundle& bundle(const std::string& name) {
    static std::map<std::string, Bundle> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, Bundle::load(std::string(MG_DATA_DIR) + "/bundles/" + name)).first;
    return it->second;
}

GroundResult ground_sentence(const std::string& sentence, const Bundle& b) {
    AtomStore s;
    comprehend(sentence, b, s);
    return ground(s, b);
}

std::set<std::string> fact_strings(const GroundResult& r) {
    std::set<std::string> out;
    for (const auto& f : r.facts) out.insert(f.to_string());
    return out;
}

// Every pair of the network, as "a b {R}" text with a < b by first mention.
std::string net_text(const GroundResult& r, const std::string& frame = "rcc8") { return r.network(frame).to_text(); }

}  // namespace

TEST_CASE("voice does not change the comprehended atoms") {
    const auto& b = bundle("jack-jill");
    AtomStore a, p;
    auto ca = comprehend("Jack partially overlaps Jill", b, a);
    auto cp = comprehend("Jill is partially overlapped by Jack", b, p);
    CHECK(ca.alternatives >= 1);
    CHECK(equal_up_to_renaming(a, p));
}

TEST_CASE("partial overlap grounds to PO") {
    const auto& b = bundle("jack-jill");
    for (const char* s : {"Jack partially overlaps Jill", "Jill is partially overlapped by Jack."}) {
        auto r = ground_sentence(s, b);
        CHECK(fact_strings(r) == std::set<std::string>{"rcc8 Jack Jill {PO}"});
        CHECK(r.unmatched.empty());
    }
    // Without the adverb the equivalence does not apply.
    auto plain = ground_sentence("Jack overlaps Jill", b);
    CHECK(plain.facts.empty());
    CHECK(plain.unmatched.size() == 1);
}

TEST_CASE("express then ground is the identity on singletons") {
    const auto& b = bundle("minimal-rcc");
    for (int r = 0; r < 8; ++r) {
        GroundFact f{"rcc8", RelationSet::single(Algebra::Rcc8, r), "region-4", "region-9", {}, ""};
        AtomStore s;
        express({f}, b, s);
        auto g = ground(s, b);
        REQUIRE(g.facts.size() == 1);
        CHECK(g.network("rcc8").relation("region-4", "region-9") == f.relation);
    }
    AtomStore empty;
    express(ConstraintNetwork(Algebra::Rcc8), "rcc8", b, empty);
    CHECK(empty.size() == 0);

    // Complements are said with "not".
    GroundFact neq_fact{"rcc8", RelationSet::single(Algebra::Rcc8, static_cast<int>(Rcc8::EQ)).complement(), "region-1",
                      "region-2", {}, ""};
    AtomStore s;
    express({neq_fact}, b, s);
    CHECK(ground(s, b).network("rcc8").relation("region-1", "region-2") == neq_fact.relation);

    GroundFact pp{"rcc8", RelationSet::parse(Algebra::Rcc8, "{TPP,NTPP}"), "region-1", "region-2", {}, ""};
    AtomStore t;
    CHECK_THROWS_AS(express({pp}, b, t), DomainError);
}

TEST_CASE("comprehension of the sample sentences") {
    const auto& b = bundle("minimal-rcc");
    CHECK(net_text(ground_sentence("Region 5 is a non-tangential proper part of Region 7", b)) ==
          "region-5 region-7 {NTPP}\n");
    CHECK(net_text(ground_sentence("Region 6 is partially overlapping with Region 55", b)) ==
          "region-6 region-55 {PO}\n");
    CHECK(net_text(ground_sentence("Region 7 is not equal to Region 6", b)) ==
          "region-7 region-6 {DC,EC,PO,TPP,NTPP,TPPi,NTPPi}\n");
    auto two = ground_sentence("Region 3 is equal to Region 7,\n and Region 7 is externally connected with Region 9", b);
    CHECK(fact_strings(two) == std::set<std::string>{"rcc8 region-3 region-7 {EQ}", "rcc8 region-7 region-9 {EC}"});
    auto three = ground_sentence("Region 4 is equal to Region 5, and Region 5 is equal to Region 6", b);
    CHECK(fact_strings(three) == std::set<std::string>{"rcc8 region-4 region-5 {EQ}", "rcc8 region-5 region-6 {EQ}"});
    CHECK_THROWS_AS(ground_sentence("Region 4 equal Region 5", b), DomainError);
    CHECK_THROWS_AS(ground_sentence("Region 4 is purple", b), DomainError);
}

TEST_CASE("conjunctions ground to the union of their conjuncts") {
    const auto& b = bundle("minimal-rcc");
    const std::vector<std::string> clauses{"Region 1 is equal to Region 2", "Region 2 is disconnected from Region 3",
                                           "Region 3 is a tangential proper part of Region 4",
                                           "Region 4 is not partially overlapping with Region 5"};
    for (std::size_t i = 0; i < clauses.size(); ++i)
        for (std::size_t j = 0; j < clauses.size(); ++j) {
            if (i == j) continue;
            auto both = fact_strings(ground_sentence(clauses[i] + ", and " + clauses[j], b));
            auto u = fact_strings(ground_sentence(clauses[i], b));
            auto v = fact_strings(ground_sentence(clauses[j], b));
            u.insert(v.begin(), v.end());
            CHECK(both == u);
        }
}

TEST_CASE("generation inverts comprehension") {
    const auto& jj = bundle("jack-jill");
    {
        AtomStore s;
        express({GroundFact{"rcc8", Rcc8::PO, "Jack", "Jill", {}, ""}}, jj, s);
        GenerateOptions wide;
        wide.extra_lengths = 2;
        auto gen = generate(s, jj, wide);
        REQUIRE(gen.size() == 1);
        REQUIRE_FALSE(gen[0].candidates.empty());
        CHECK(gen[0].candidates[0].sentence == "Jack partially overlaps Jill");
        // the passive is also found, ranked lower
        bool passive = false;
        for (const auto& c : gen[0].candidates) passive |= c.sentence == "Jill is partially overlapped by Jack";
        CHECK(passive);
    }
    const auto& b = bundle("minimal-rcc");
    {
        AtomStore s;
        express({GroundFact{"rcc8", Rcc8::EQ, "region-4", "region-5", {}, ""}}, b, s);
        auto gen = generate(s, b);
        REQUIRE(gen.size() == 1);
        CHECK(gen[0].candidates.at(0).sentence == "Region 4 is equal to Region 5");
    }
    CHECK(generate(AtomStore{}, b).empty());
    {
        AtomStore s;
        express({GroundFact{"rcc8", Rcc8::PO, "Jack", "Jill", {}, ""}}, jj, s);
        CHECK_THROWS_AS(generate(s, b), DomainError);  // no word for Jack here
    }
}

TEST_CASE("round trip over every base relation and several region pairs") {
    const auto& b = bundle("minimal-rcc");
    const std::vector<std::pair<int, int>> pairs{{1, 2}, {5, 7}, {7, 6}, {6, 55}, {12, 3}};
    int ok = 0;
    for (int r = 0; r < 8; ++r)
        for (auto [m, n] : pairs) {
            const std::string x = "region-" + std::to_string(m), y = "region-" + std::to_string(n);
            GroundFact f{"rcc8", RelationSet::single(Algebra::Rcc8, r), x, y, {}, ""};
            AtomStore s;
            express({f}, b, s);
            auto gen = generate(s, b);
            REQUIRE(gen.size() == 1);
            REQUIRE_FALSE(gen[0].candidates.empty());
            const Candidate& top = gen[0].candidates[0];
            CHECK(aesthetic(top.tokens, gen[0].targets, b));
            auto back = ground_sentence(top.sentence, b);
            REQUIRE(back.facts.size() == 1);
            bool same = back.network("rcc8").relation(x, y) == f.relation;
            CHECK_MESSAGE(same, top.sentence);
            ok += same;
        }
    CHECK(ok == 40);
}

TEST_CASE("sample sentences regenerate with the same grounding") {
    const auto& b = bundle("minimal-rcc");
    for (const char* sentence :
         {"Region 5 is a non-tangential proper part of Region 7", "Region 7 is not equal to Region 6",
          "Region 6 is partially overlapping with Region 55",
          "Region 3 is equal to Region 7, and Region 7 is externally connected with Region 9",
          "Region 4 is equal to Region 5, and Region 5 is equal to Region 6"}) {
        AtomStore s;
        comprehend(sentence, b, s);
        auto original = fact_strings(ground(s, b));
        std::set<std::string> regenerated;
        for (const auto& g : generate(s, b)) {
            REQUIRE_FALSE(g.candidates.empty());
            auto r = fact_strings(ground_sentence(g.candidates[0].sentence, b));
            regenerated.insert(r.begin(), r.end());
        }
        CHECK_MESSAGE(regenerated == original, sentence);
    }
}

TEST_CASE("generated sentences are minimal") {
    const auto& b = bundle("minimal-rcc");
    AtomStore s;
    express({GroundFact{"rcc8", Rcc8::NTPPi, "region-2", "region-8", {}, ""}}, b, s);
    auto gen = generate(s, b);
    REQUIRE(gen.size() == 1);
    for (const auto& c : gen[0].candidates) {
        for (std::size_t i = 0; i < c.tokens.size(); ++i) {
            auto shorter = c.tokens;
            shorter.erase(shorter.begin() + static_cast<std::ptrdiff_t>(i));
            CHECK_FALSE(expresses(shorter, gen[0].targets, b));
        }
    }
    // "." can be dropped without losing anything, so it is not aesthetic
    std::vector<std::string> with_period{"Region", "8", "is", "a", "non-tangential_proper_part", "of", "Region", "2", "."};
    CHECK(expresses(with_period, gen[0].targets, b));
    CHECK_FALSE(aesthetic(with_period, gen[0].targets, b));
}

TEST_CASE("generation is stable under comprehension") {
    const auto& b = bundle("minimal-rcc");
    for (const char* sentence : {"Region 5 is a non-tangential proper part of Region 7", "Region 7 is not equal to Region 6",
                                 "Region 1 is disconnected from Region 2"}) {
        AtomStore s;
        comprehend(sentence, b, s);
        auto gen = generate(s, b);
        REQUIRE(gen.size() == 1);
        AtomStore again;
        comprehend(gen[0].candidates.at(0).sentence, b, again);
        CHECK(equal_up_to_renaming(s, again));
    }
}

TEST_CASE("grounding rule files are checked") {
    CHECK_THROWS_AS(Bundle::parse_grounding("(ground g (side language) (frame rcc8) (relation PO) "
                                            "(logic (EvaluationLink (PredicateNode \"p\") (ListLink $x $z))))",
                                            nullptr),
                    ParseError);
    CHECK_THROWS_AS(Bundle::parse_grounding("(ground g (side language) (frame rcc9) (relation PO) "
                                            "(logic (EvaluationLink (PredicateNode \"p\") (ListLink $x $y))))",
                                            nullptr),
                    ParseError);
    CHECK_THROWS_AS(Bundle::parse_grounding("(ground g (side language) (frame rcc8) (relation XX) "
                                            "(logic (EvaluationLink (PredicateNode \"p\") (ListLink $x $y))))",
                                            nullptr),
                    ParseError);
    std::map<std::string, double> q;
    auto rules = Bundle::parse_grounding("(qualifier often 0.7)\n(ground g (side perception) (frame allen:h) (relation G) "
                                         "(stv 0.9 3) (logic (EvaluationLink (PredicateNode \"gap\") (ListLink $x $y))))",
                                         &q);
    REQUIRE(rules.size() == 1);
    CHECK(q.at("often") == doctest::Approx(0.7));
    CHECK(rules[0].relation == gao_relations(GaoLetter::G));
    CHECK(rules[0].tv.count == 3);
}
