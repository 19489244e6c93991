#pragma once

// Shared fixtures used across test suites.

#include "mddlog/core.hpp"
#include "mddlog/eval.hpp"

namespace fixtures {

using namespace mddlog;

inline Program pi_2col() {
    return parse_program(
        "edb e/2.\nidb W/1, B/1.\ngoal/0.\n"
        "W(x) v B(x) :- true(x).\n"
        "goal() :- e(x,y), W(x), W(y).\n"
        "goal() :- e(x,y), B(x), B(y).\n");
}

inline Program pi_tri() {
    return parse_program(
        "edb A/1, r/2.\nidb P/1.\ngoal/0.\n"
        "P(x3) :- A(x1), r(x1,x2), r(x2,x3), r(x3,x1).\n"
        "goal() :- r(x1,x2), r(x2,x3), r(x3,x1), P(x1), P(x2), P(x3).\n");
}

// Boolean MDDLog program equivalent to coCSP(TT2).
inline Program cocsp_tt2_program() {
    return parse_program(
        "edb r/2.\nidb P0/1, P1/1.\ngoal/0.\n"
        "P0(x) v P1(x) :- true(x).\n"
        "goal() :- r(x,y), P0(x), P0(y).\n"
        "goal() :- r(x,y), P1(x), P0(y).\n"
        "goal() :- r(x,y), P1(x), P1(y).\n");
}

// Example of a unary MDDLog program rewritable into MDLog with one parameter
// (returns the constants lying on an R-cycle).
inline Program example_72() {
    return parse_program(
        "edb R/2.\nidb P0/1, P1/1.\ngoal/1.\n"
        "P0(x) v P1(y) :- R(x,y).\n"
        "goal(x) :- P0(x).\n"
        "P1(y) :- P1(x), R(x,y).\n"
        "goal(x) :- P1(x).\n");
}

// The MDLog program with one parameter it is equivalent to.
inline Program example_71() {
    return parse_program(
        "edb R/2.\nidb P/2.\ngoal/1.\nparams 1.\n"
        "P(y|x) :- R(y,x).\n"
        "P(z|x) :- P(y|x), R(z,y).\n"
        "goal(x) :- P(x|x).\n");
}

inline Instance k2() {
    Instance t = parse_instance("edb e/2.\ne(0,1).\ne(1,0).");
    return t;
}

inline Instance tt2() { return parse_instance("edb e/2.\ne(0,1)."); }

inline Instance t_loop() { return parse_instance("edb e/2.\ne(0,0)."); }

inline Instance triangle(const std::string& rel = "e") {
    return parse_instance("edb " + rel + "/2.\n" + rel + "(a,b).\n" + rel + "(b,c).\n" +
                          rel + "(c,a).");
}

inline Instance edge(const std::string& rel = "e") {
    return parse_instance("edb " + rel + "/2.\n" + rel + "(a,b).");
}

// Example 3.1: aggregation schema {R_q} with q the directed r-triangle, and
// the three R_q facts.
inline ConjunctiveQuery triangle_cq() {
    ConjunctiveQuery q;
    q.answer_vars = {"x1", "x2", "x3"};
    q.atoms = {{"r", {var("x1"), var("x2")}},
               {"r", {var("x2"), var("x3")}},
               {"r", {var("x3"), var("x1")}}};
    return q;
}

inline TemplateSet single_template(const Instance& t) {
    TemplateSet s;
    s.schema = t.schema;
    s.templates = {t};
    return s;
}

}  // namespace fixtures
