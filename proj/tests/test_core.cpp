#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mddlog/core.hpp"

using namespace mddlog;

namespace {
const char* kPi2Col =
    "edb e/2.\n"
    "idb W/1, B/1.\n"
    "goal/0.\n"
    "W(x) v B(x) :- true(x).\n"
    "goal() :- e(x,y), W(x), W(y).\n"
    "goal() :- e(x,y), B(x), B(y).\n";

const char* kPiTri =
    "edb A/1, r/2.\n"
    "idb P/1.\n"
    "goal/0.\n"
    "P(x3) :- A(x1), r(x1,x2), r(x2,x3), r(x3,x1).\n"
    "goal() :- r(x1,x2), r(x2,x3), r(x3,x1), P(x1), P(x2), P(x3).\n";
}  // namespace

TEST_CASE("parse minimal program") {
    auto p = parse_program("goal() :- A(x).");
    CHECK(p.goal_arity == 0);
    CHECK(p.rules.size() == 1);
    CHECK(p.edb.has("A"));
}

TEST_CASE("parse PI_TRI fixture") {
    auto p = parse_program(kPiTri);
    CHECK(p.rules.size() == 2);
    CHECK(p.idb.has("P"));
    CHECK(p.idb.has("goal"));
    CHECK(p.is_monadic());
    CHECK(p.diameter() == 3);
}

TEST_CASE("head variable not in body rejected") {
    CHECK_THROWS_AS(parse_program("P(y) :- A(x)."), ValidationError);
}

TEST_CASE("goal in body rejected") {
    CHECK_THROWS_AS(parse_program("goal/0.\nP(x) :- goal(), A(x)."), ValidationError);
}

TEST_CASE("syntax error carries position") {
    try {
        parse_program("goal() :- A(x,.");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.col > 1);
    }
}

TEST_CASE("expand_true_sugar over binary EDB") {
    auto p = parse_program("edb e/2.\nW(x) v B(x) :- true(x).");
    auto q = expand_true_sugar(p);
    CHECK(q.rules.size() == 2);
    for (auto& r : q.rules) {
        REQUIRE(r.body.size() == 1);
        CHECK(r.body[0].rel == "e");
    }
}

TEST_CASE("expand_true_sugar identity and unary cases") {
    auto p = parse_program("edb A/1.\ngoal() :- A(x), A(y).");
    auto same = expand_true_sugar(p);
    REQUIRE(same.rules.size() == 1);
    CHECK(same.rules[0] == canonical_rule(p.rules[0]));
    auto q = expand_true_sugar(parse_program("edb A/1.\nW(x) :- true(x)."));
    REQUIRE(q.rules.size() == 1);
    CHECK(q.rules[0].body[0].rel == "A");
}

TEST_CASE("render round trips") {
    for (auto* txt : {kPi2Col, kPiTri}) {
        auto p = parse_program(txt);
        auto q = parse_program(render(p));
        CHECK(q.edb == p.edb);
        CHECK(q.idb == p.idb);
        std::set<Rule> a, b;
        for (auto& r : p.rules) a.insert(canonical_rule(r));
        for (auto& r : q.rules) b.insert(canonical_rule(r));
        CHECK(a == b);
    }
}

TEST_CASE("instance parse and render") {
    auto i = parse_instance("edb r/2.\nr(a,b).\nr(b,c').\n");
    CHECK(i.facts.size() == 2);
    CHECK(i.adom().count("c'"));
    auto j = parse_instance(render(i));
    CHECK(i == j);
    auto empty = parse_instance("edb r/2.\n");
    CHECK(render(empty) == "edb r/2.\n");
}

TEST_CASE("ucq parse, equality resolution, render") {
    auto q = parse_ucq("q(x) :- e(x,y), A(y).\nor\nq(x) :- e(x,x).\n");
    CHECK(q.disjuncts.size() == 2);
    auto q2 = parse_ucq(render(q));
    CHECK(canonical_ucq(q2) == canonical_ucq(q));
    auto eq = parse_ucq("q(x) :- e(x,y), =(x,y).");
    REQUIRE(eq.disjuncts.size() == 1);
    CHECK(eq.disjuncts[0].atoms.size() == 1);
    CHECK(eq.disjuncts[0].atoms[0].args[0] == eq.disjuncts[0].atoms[0].args[1]);
}

TEST_CASE("canonical forms are renaming invariant") {
    auto r1 = parse_program("goal() :- r(u,w), r(w,u).").rules[0];
    auto r2 = parse_program("goal() :- r(b,a), r(a,b).").rules[0];
    CHECK(canonical_rule(r1) == canonical_rule(r2));
    Instance i1 = parse_instance("r(p,q).\nr(q,p).");
    Instance i2 = parse_instance("r(z,y).\nr(y,z).");
    CHECK(canonical_instance(i1) == canonical_instance(i2));
}

TEST_CASE("mmsnp parse and bridge shape") {
    auto s = parse_mmsnp("mmsnp { exists X. forall x,y. X(x) <- A(x). false <- X(x), B(x). }");
    CHECK(s.so_vars.size() == 1);
    CHECK(s.implications.size() == 2);
    auto p = mmsnp_to_mddlog(s);
    CHECK(p.is_boolean());
    CHECK(p.is_monadic());
    CHECK(p.diameter() == s.diameter());
    auto s2 = mddlog_to_mmsnp(p);
    CHECK(s2.so_vars.size() == 1);
}

TEST_CASE("parameterized program surface syntax") {
    auto p = parse_program(
        "edb R/2.\nidb P/2.\ngoal/1.\nparams 1.\n"
        "P(y|x) :- R(y,x).\n"
        "P(z|x) :- P(y|x), R(z,y).\n"
        "goal(x) :- P(x|x).\n");
    CHECK(p.parameter_count == 1);
    CHECK(p.is_datalog());
    p.validate();
}
