#include <random>
#include <set>

#include "doctest.h"
#include "mg/atom.hpp"
#include "mg/error.hpp"
#include "util.hpp"

using namespace mg;

namespace {

AtomId cnode(AtomStore& s, const char* name) { return s.intern(AtomKind::ConceptNode, name); }
AtomId pred(AtomStore& s, const char* name) { return s.intern(AtomKind::PredicateNode, name); }
AtomId list(AtomStore& s, std::vector<AtomId> t) { return s.intern(AtomKind::ListLink, std::move(t)); }
AtomId eval(AtomStore& s, AtomId p, std::vector<AtomId> args) {
    return s.intern(AtomKind::EvaluationLink, {p, list(s, std::move(args))});
}

AtomStore random_store(std::mt19937& rng, int n) {
    AtomStore s;
    const char* names[] = {"cat", "snake", "chase", "a b", "q\"uote", "x@1", "region-5", "partially"};
    const AtomKind nodes[] = {AtomKind::ConceptNode, AtomKind::PredicateNode, AtomKind::NumberNode,
                              AtomKind::SpecificEntityNode};
    const AtomKind links[] = {AtomKind::ListLink, AtomKind::EvaluationLink, AtomKind::InheritanceLink,
                              AtomKind::AndLink, AtomKind::NotLink};
    std::uniform_int_distribution<int> coin(0, 2);
    for (int i = 0; i < n; ++i) {
        std::optional<TruthValue> tv;
        if (coin(rng) == 0) tv = TruthValue{std::uniform_int_distribution<int>(0, 8)(rng) / 8.0,
                                            std::uniform_int_distribution<int>(0, 20)(rng) * 0.25};
        if (s.size() < 3 || coin(rng) == 0) {
            s.intern(nodes[rng() % 4], names[rng() % 8], tv);
        } else {
            std::vector<AtomId> t;
            int arity = 1 + static_cast<int>(rng() % 3);
            for (int k = 0; k < arity; ++k) t.push_back(static_cast<AtomId>(rng() % s.size()));
            s.intern(links[rng() % 5], t, tv);
        }
    }
    return s;
}

// Exhaustive substitution oracle: try every assignment of store atoms to
// the pattern variables and keep those whose instantiation already exists.
std::optional<AtomId> lookup(const PatternNode& p, const Binding& b, const AtomStore& s) {
    if (p.is_variable()) return b.at(p.name);
    if (is_node(p.kind)) return s.find(p.kind, p.name);
    std::vector<AtomId> t;
    for (auto& c : p.children) {
        auto id = lookup(c, b, s);
        if (!id) return std::nullopt;
        t.push_back(*id);
    }
    return s.find(p.kind, t);
}

}  // namespace

TEST_CASE("intern deduplicates nodes and links") {
    AtomStore s;
    CHECK(cnode(s, "cat") == cnode(s, "cat"));
    AtomId chase = s.fresh_instance("chase", AtomKind::PredicateNode);
    AtomId cat = s.fresh_instance("cat");
    AtomId snake = s.fresh_instance("snake");
    AtomId e1 = eval(s, chase, {cat, snake});
    AtomId e2 = eval(s, chase, {cat, snake});
    CHECK(e1 == e2);
    CHECK(s.render(e1) ==
          "(EvaluationLink (stv 1 1) (PredicateNode \"chase@1\") (ListLink (ConceptNode \"cat@1\") "
          "(ConceptNode \"snake@1\")))");
    CHECK(s.size() == 6);
}

TEST_CASE("duplicate keeps the truth value with the larger count in either order") {
    auto run = [](double first, double second) {
        AtomStore s;
        AtomId p = pred(s, "bark");
        AtomId d = cnode(s, "dogs");
        s.intern(AtomKind::EvaluationLink, {p, d}, TruthValue{0.5, first});
        AtomId e = s.intern(AtomKind::EvaluationLink, {p, d}, TruthValue{0.9, second});
        return s[e].tv.count;
    };
    CHECK(run(1, 5) == 5);
    CHECK(run(5, 1) == 5);
    AtomStore s;
    AtomId c = s.intern(AtomKind::ConceptNode, "x", TruthValue{0.3, 2});
    s.intern(AtomKind::ConceptNode, "x");
    CHECK(s[c].tv == TruthValue{0.3, 2});
}

TEST_CASE("intern rejects bad input") {
    AtomStore s;
    CHECK_THROWS_AS(s.intern(AtomKind::ListLink, std::vector<AtomId>{7}), Error);
    CHECK_THROWS_AS(s.intern(AtomKind::ListLink, "name"), Error);
    CHECK_THROWS_AS(s.intern(AtomKind::ConceptNode, std::vector<AtomId>{}), Error);
    CHECK_THROWS_AS(s.intern(AtomKind::ConceptNode, "x", TruthValue{1.5, 1}), Error);
    CHECK_THROWS_AS(s.intern(AtomKind::ConceptNode, "x", TruthValue{0.5, -1}), Error);
}

TEST_CASE("fresh instances count per base") {
    AtomStore s;
    CHECK(s[s.fresh_instance("cat")].name == "cat@1");
    CHECK(s[s.fresh_instance("snake")].name == "snake@1");
    CHECK(s[s.fresh_instance("cat")].name == "cat@2");
    CHECK(s[s.fresh_instance("bark", AtomKind::PredicateNode)].kind == AtomKind::PredicateNode);
    // the counter skips names that already exist in the store
    AtomStore t = AtomStore::from_text("(ConceptNode \"dog@4\")");
    CHECK(t.next_instance_name("dog") == "dog@5");
}

TEST_CASE("confidence uses kappa one") {
    CHECK(TruthValue{1, 1}.confidence() == doctest::Approx(0.5));
    CHECK(TruthValue{1, 0}.confidence() == 0);
    CHECK(TruthValue{1, 9}.confidence() == doctest::Approx(0.9));
}

TEST_CASE("match binds variables") {
    AtomStore s;
    eval(s, pred(s, "bark"), {cnode(s, "dogs")});
    auto p = AtomPattern::parse(
        "(EvaluationLink (PredicateNode \"bark\") (ListLink (VariableNode \"$X\")))");
    auto bs = match(p, s);
    REQUIRE(bs.size() == 1);
    CHECK(s[bs[0].at("$X")].name == "dogs");

    auto closed = AtomPattern::parse("(EvaluationLink (PredicateNode \"bark\") (ListLink (ConceptNode \"dogs\")))");
    auto cb = match(closed, s);
    REQUIRE(cb.size() == 1);
    CHECK(cb[0].empty());

    auto missing = AtomPattern::parse("(EvaluationLink (PredicateNode \"meow\") (ListLink $X))");
    CHECK(match(missing, s).empty());
}

TEST_CASE("match agrees with exhaustive substitution") {
    std::mt19937 rng(7);
    for (int round = 0; round < 40; ++round) {
        AtomStore s;
        AtomId a = cnode(s, "a"), b = cnode(s, "b");
        AtomId p = pred(s, round % 2 ? "p" : "q");
        const AtomId choices[] = {a, b};
        for (int k = 0; k < 3; ++k) eval(s, p, {choices[rng() % 2], choices[rng() % 2]});
        auto pattern = AtomPattern::parse(round % 3 == 0 ? "(EvaluationLink $P (ListLink $X $X))"
                                          : round % 3 == 1 ? "(EvaluationLink (PredicateNode \"p\") (ListLink $X $Y))"
                                                           : "(EvaluationLink $P $X)");
        std::set<Binding> oracle;
        const auto& vars = pattern.variables;
        REQUIRE(vars.size() == 2);
        for (AtomId x = 0; x < s.size(); ++x)
            for (AtomId y = 0; y < s.size(); ++y) {
                Binding bnd{{vars[0], x}, {vars[1], y}};
                if (lookup(pattern.root, bnd, s)) oracle.insert(bnd);
            }
        auto got = match(pattern, s);
        std::set<Binding> got_set(got.begin(), got.end());
        CHECK(got_set.size() == got.size());
        CHECK(got_set == oracle);
        for (auto& bnd : got) {
            std::size_t before = s.size();
            substitute(pattern, bnd, s);
            CHECK(s.size() == before);
        }
    }
}

TEST_CASE("match_all joins conjunctions") {
    AtomStore s;
    AtomId ov = pred(s, "overlaps");
    eval(s, ov, {cnode(s, "x"), cnode(s, "y")});
    eval(s, ov, {cnode(s, "y"), cnode(s, "z")});
    s.intern(AtomKind::InheritanceLink,
             {s.intern(AtomKind::SatisfyingSetLink, {ov}), cnode(s, "partially")});
    std::vector<AtomPattern> ps{
        AtomPattern::parse("(EvaluationLink (PredicateNode \"overlaps\") (ListLink $x $y))"),
        AtomPattern::parse(
            "(InheritanceLink (SatisfyingSetLink (PredicateNode \"overlaps\")) (ConceptNode \"partially\"))")};
    auto bs = match_all(ps, s);
    REQUIRE(bs.size() == 2);
    CHECK(s[bs[0].at("$x")].name == "x");
    CHECK(s[bs[1].at("$x")].name == "y");
}

TEST_CASE("substitute instantiates and round-trips through match") {
    AtomStore s;
    AtomId dogs = cnode(s, "dogs");
    auto p = AtomPattern::parse("(EvaluationLink (PredicateNode \"bark\") (ListLink $X))");
    AtomId e = substitute(p, {{"$X", dogs}}, s);
    CHECK(s.render(e, false) ==
          "(EvaluationLink (PredicateNode \"bark\") (ListLink (ConceptNode \"dogs\")))");
    CHECK(substitute(p, {{"$X", dogs}}, s) == e);
    auto bs = match(p, s);
    REQUIRE(bs.size() == 1);
    CHECK(bs[0].at("$X") == dogs);

    // a variable bound to a link nests it
    AtomId inner = list(s, {dogs, dogs});
    AtomId nested = substitute(p, {{"$X", inner}}, s);
    AtomStore manual;
    AtomId md = cnode(manual, "dogs");
    AtomId ml = list(manual, {md, md});
    AtomId mp = pred(manual, "bark");
    AtomId me = manual.intern(AtomKind::EvaluationLink, {mp, list(manual, {ml})});
    CHECK(s.render(nested) == manual.render(me));
    CHECK_THROWS_AS(substitute(p, {}, s), Error);
}

TEST_CASE("text format round trip") {
    AtomStore empty;
    CHECK(empty.to_text().empty());
    CHECK(AtomStore::from_text("") == empty);

    AtomStore listing = AtomStore::from_text(testutil::test_data("po_listing.atoms"));
    CHECK(AtomStore::from_text(listing.to_text()) == listing);
    CHECK(listing.to_text().find("(PredicateNode \"overlaps@5d9c\")") != std::string::npos);

    std::mt19937 rng(42);
    for (int i = 0; i < 20; ++i) {
        AtomStore s = random_store(rng, 100);
        std::string text = s.to_text();
        AtomStore back = AtomStore::from_text(text);
        CHECK(back == s);
        CHECK(back.to_text() == text);
    }
}

TEST_CASE("text format errors carry positions") {
    try {
        AtomStore::from_text("(ConceptNode \"a\")\n  (FooLink (ConceptNode \"b\"))");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 4);
    }
    CHECK_THROWS_AS(AtomStore::from_text("(ConceptNode \"a\""), ParseError);
    CHECK_THROWS_AS(AtomStore::from_text("(ConceptNode (stv 2 1) \"a\")"), ParseError);
    CHECK_THROWS_AS(AtomStore::from_text("(ListLink \"a\")"), ParseError);
}

TEST_CASE("normalize_instances generalizes instance structures") {
    AtomStore listing = AtomStore::from_text(testutil::test_data("po_listing.atoms"));
    AtomStore before = listing;
    normalize_instances(listing);
    auto want = AtomPattern::parse(
        "(InheritanceLink (SatisfyingSetLink (PredicateNode \"overlaps\")) (ConceptNode \"partially\"))");
    CHECK(match(want, listing).size() == 1);
    auto eval_general =
        AtomPattern::parse("(EvaluationLink (PredicateNode \"overlaps\") (ListLink (ConceptNode \"Jack\") "
                           "(ConceptNode \"Jill\")))");
    CHECK(match(eval_general, listing).size() == 1);
    // monotone: every original atom is still there
    for (AtomId id = 0; id < before.size(); ++id) CHECK(listing.render(id) == before.render(id));
    CHECK(listing.size() > before.size());
    // idempotent
    AtomStore again = listing;
    normalize_instances(again);
    CHECK(again == listing);

    AtomStore plain;
    eval(plain, pred(plain, "bark"), {cnode(plain, "dogs")});
    AtomStore copy = plain;
    normalize_instances(copy);
    CHECK(copy == plain);
}

TEST_CASE("normalize_instances reaches nested instances in one pass") {
    AtomStore s;
    AtomId x1 = s.fresh_instance("x");
    s.intern(AtomKind::InheritanceLink, {x1, cnode(s, "x")});
    AtomId p1 = s.fresh_instance("p", AtomKind::PredicateNode);
    s.intern(AtomKind::ImplicationLink, {p1, pred(s, "p")});
    s.intern(AtomKind::NotLink, {eval(s, p1, {x1})});
    normalize_instances(s);
    // manual closure: both the inner evaluation and the negation are generalized
    CHECK(match(AtomPattern::parse("(EvaluationLink (PredicateNode \"p\") (ListLink (ConceptNode \"x\")))"), s).size() ==
          1);
    CHECK(match(AtomPattern::parse(
                    "(NotLink (EvaluationLink (PredicateNode \"p\") (ListLink (ConceptNode \"x\"))))"),
                s)
              .size() == 1);
    // scaffolding itself is not generalized
    CHECK_FALSE(s.find(AtomKind::InheritanceLink, {cnode(s, "x"), cnode(s, "x")}));
}

TEST_CASE("equality up to instance renaming") {
    AtomStore a = AtomStore::from_text(
        "(EvaluationLink (PredicateNode \"p@1\") (ListLink (ConceptNode \"x@1\") (ConceptNode \"x@2\")))");
    AtomStore b = AtomStore::from_text(
        "(EvaluationLink (PredicateNode \"p@7\") (ListLink (ConceptNode \"x@9\") (ConceptNode \"x@3\")))");
    AtomStore c = AtomStore::from_text(
        "(EvaluationLink (PredicateNode \"q@7\") (ListLink (ConceptNode \"x@9\") (ConceptNode \"x@3\")))");
    CHECK(equal_up_to_renaming(a, b));
    CHECK_FALSE(equal_up_to_renaming(a, c));
    CHECK_FALSE(a == b);
}
