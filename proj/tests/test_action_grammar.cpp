#include <doctest.h>

#include <random>
#include <string>

#include "mg/action_grammar.hpp"
#include "mg/error.hpp"
#include "util.hpp"

using namespace mg;
using testutil::slurp;

namespace {

std::string data(const std::string& name) { return slurp(std::string(MG_DATA_DIR) + "/action/" + name); }

// Allen relation from endpoint comparisons, written out case by case.
std::string allen_oracle(IntInterval x, IntInterval y) {
    if (x.end < y.start) return "before";
    if (y.end < x.start) return "after";
    if (x.end == y.start) return "meets";
    if (y.end == x.start) return "met-by";
    if (x.start == y.start && x.end == y.end) return "equal";
    if (x.start == y.start) return x.end < y.end ? "starts" : "started-by";
    if (x.end == y.end) return x.start > y.start ? "finishes" : "finished-by";
    if (x.start > y.start && x.end < y.end) return "during";
    if (x.start < y.start && x.end > y.end) return "contains";
    return x.start < y.start ? "overlaps" : "overlapped-by";
}

bool has(const std::vector<std::string>& vs, const std::string& needle) {
    for (const auto& v : vs)
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("moving the leg back then kicking it forward is accepted") {
    auto g = ActionGrammar::load(data("kick.grammar"));
    CHECK(g.types.at("kick-lower-leg-forward").actuators == std::set<std::string>{"rknee", "rhip", "rankle"});
    auto check = validate_movement(g, MovementTrace::parse(data("kick.trace")));
    REQUIRE(check.ok());
    REQUIRE(check.links->size() == 1);
    CHECK(check.links->at(0).at_a.to_string() == "kick-lower-leg-forward_a+");
    CHECK(check.links->at(0).at_b.to_string() == "move-lower-leg-back_a-");
}

TEST_CASE("a gap between the two movements is rejected") {
    auto g = ActionGrammar::load(data("kick.grammar"));
    auto check = validate_movement(g, MovementTrace::parse(data("kick-gapped.trace")));
    CHECK_FALSE(check.ok());
    CHECK(has(check.violations, "back (move-lower-leg-back) disjunct 1: kick-lower-leg-forward_a+ unsatisfied"));
    // order matters too: kick first, then move
    auto reversed = MovementTrace::parse("kick kick-lower-leg-forward [0,3] 30 5\nback move-lower-leg-back [3,6] 45\n");
    CHECK_FALSE(validate_movement(g, reversed).ok());
}

TEST_CASE("parameters must lie in the declared box") {
    auto g = ActionGrammar::load(data("kick.grammar"));
    auto check = validate_movement(g, MovementTrace::parse("back move-lower-leg-back [0,3] 120\nkick kick-lower-leg-forward [3,6] 30 5\n"));
    CHECK_FALSE(check.ok());
    CHECK(has(check.violations, "back (move-lower-leg-back): parameter 1 = 120 outside [0,90]"));
    CHECK(has(validate_movement(g, MovementTrace::parse("back move-lower-leg-back [0,3] 45\nkick kick-lower-leg-forward [3,6] 30\n")).violations,
              "1 parameters, expected 2"));
    CHECK_THROWS_AS(validate_movement(g, MovementTrace::parse("x1 jump [0,3]\n")), DomainError);
}

TEST_CASE("Allen connectors agree with the endpoint oracle") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pos(0, 8), len(1, 4);
    const std::vector<std::string> names{"before", "meets", "overlaps", "starts", "during", "finishes", "equal",
                                         "finished-by", "contains", "started-by", "overlapped-by", "met-by", "after"};
    for (int n = 0; n < 500; ++n) {
        int s1 = pos(rng), s2 = pos(rng);
        AnimationInstance x{"x", "p", {s1, s1 + len(rng)}, {}, {}};
        AnimationInstance y{"y", "q", {s2, s2 + len(rng)}, {}, {}};
        const std::string truth = allen_oracle(x.interval, y.interval);
        for (const auto& r : names) {
            ActionConnector cx{"q", r, '+'}, cy{"p", r, '-'};
            CHECK(action_connectors_pair(x, cx, y, cy) == (r == truth));
        }
    }
}

TEST_CASE("letter connectors: gap, abut, overlap") {
    AnimationInstance a{"a", "p", {0, 3}, {}, {}};
    AnimationInstance b{"b", "q", {5, 8}, {}, {}};
    AnimationInstance c{"c", "q", {3, 8}, {}, {}};
    AnimationInstance d{"d", "q", {0, 3}, {}, {}};
    CHECK(action_connectors_pair(a, {"q", "g", '+'}, b, {"p", "g", '-'}));
    CHECK_FALSE(action_connectors_pair(a, {"q", "g", '-'}, b, {"p", "g", '+'}));
    CHECK(action_connectors_pair(a, {"q", "a", '+'}, c, {"p", "a", '-'}));
    CHECK_FALSE(action_connectors_pair(a, {"q", "g", '+'}, c, {"p", "g", '-'}));
    // equal intervals overlap with no side, so either sign holds
    CHECK(action_connectors_pair(a, {"q", "o", '+'}, d, {"p", "o", '-'}));
    CHECK(action_connectors_pair(a, {"q", "o", '-'}, d, {"p", "o", '+'}));
    // the partner type must match
    CHECK_FALSE(action_connectors_pair(a, {"r", "g", '+'}, b, {"p", "g", '-'}));
}

TEST_CASE("piano playing: hierarchy and coordination") {
    auto g = ActionGrammar::load(data("piano.grammar"));
    auto trace = MovementTrace::parse(data("piano.trace"));
    CHECK(validate_movement(g, trace).ok());
    CHECK(check_hierarchy(g, trace).empty());
    CHECK(dependency_links(trace).size() == 7);
    CHECK(check_no_cross(trace));

    // coordinating the two shoulders directly crosses the hand-to-hand link
    auto fine = MovementTrace::parse(data("piano-fine.trace"));
    CHECK(check_hierarchy(g, fine).empty());
    CHECK_FALSE(check_no_cross(fine));
}

TEST_CASE("hierarchy violations") {
    auto g = ActionGrammar::load(data("piano.grammar"));
    // a right-arm motion under the left hand
    auto wrong_arm = MovementTrace::parse("lh play-left [0,10]\nre elbow-right [1,5] lh\n");
    CHECK(has(check_hierarchy(g, wrong_arm), "re: actuators not a subset of lh's"));
    // a child that outlasts its parent
    auto late = MovementTrace::parse("lh play-left [0,10]\nle elbow-left [5,12] lh\n");
    CHECK(has(check_hierarchy(g, late), "le: interval not within lh (overlapped-by)"));
    auto fits = MovementTrace::parse("lh play-left [0,10]\nle elbow-left [0,10] lh\nls shoulder-left [2,4] lh\n");
    CHECK(check_hierarchy(g, fits).empty());
}

TEST_CASE("crossing follows the start-time order") {
    // ties in start time are broken by id
    auto t = MovementTrace::parse("b p [0,5]\na p [0,5]\nc p [1,5]\nd p [2,5]\n");
    auto pos = trace_order(t);
    CHECK(pos == std::vector<std::size_t>{1, 0, 2, 3});
    // a-c and b-d cross in the order a b c d
    CHECK_FALSE(check_no_cross(t, {{1, 2}, {0, 3}}));
    CHECK(check_no_cross(t, {{1, 3}, {0, 2}}));
    CHECK(check_no_cross(t, {{1, 0}, {2, 3}}));
}

TEST_CASE("trace atoms") {
    AtomStore s;
    auto atoms = trace_to_atoms(MovementTrace::parse(data("piano.trace")), s);
    int inh = 0, evals = 0;
    for (AtomId a : atoms) {
        inh += s[a].kind == AtomKind::InheritanceLink;
        evals += s[a].kind == AtomKind::EvaluationLink;
    }
    CHECK(inh == 8);
    CHECK(evals == 8 * 7 / 2);

    AtomStore k;
    trace_to_atoms(MovementTrace::parse(data("kick.trace")), k);
    auto meets = k.find(AtomKind::PredicateNode, "meets");
    auto move = k.find(AtomKind::ConceptNode, "move-lower-leg-back@1");
    auto kick = k.find(AtomKind::ConceptNode, "kick-lower-leg-forward@1");
    REQUIRE((meets && move && kick));
    auto list = k.find(AtomKind::ListLink, std::vector<AtomId>{*move, *kick});
    REQUIRE(list);
    CHECK(k.find(AtomKind::EvaluationLink, std::vector<AtomId>{*meets, *list}).has_value());
}

TEST_CASE("trace text is checked") {
    CHECK_THROWS_AS(MovementTrace::parse("a p [3,3]\n"), ParseError);
    CHECK_THROWS_AS(MovementTrace::parse("a p\n"), ParseError);
    CHECK_THROWS_AS(MovementTrace::parse("a p [0,1]\na p [0,2]\n"), ParseError);
    CHECK_THROWS_AS(MovementTrace::parse("link a\n"), ParseError);
    CHECK_THROWS_AS(MovementTrace::parse("a p [0,1] ghost\n"), Error);
    CHECK_THROWS_AS(MovementTrace::parse("a p [0,1]\nlink a ghost\n"), Error);
    CHECK_THROWS_AS(ActionGrammar::load("#animation x;\nx: ();\n"), Error);
    CHECK_THROWS_AS(ActionGrammar::load("#animation x a [2,1];\nx: ();\n"), Error);
    CHECK_THROWS_AS(ActionConnector::parse(Connector{"kick_sideways", '+'}), Error);
    CHECK(ActionConnector::parse(Connector{"kick_m", '+'}).rel == "meets");
}
