#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mddlog {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
          line(line_), col(col_) {}
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- schemas

struct Relation {
    std::string name;
    int arity = 0;
    auto operator<=>(const Relation&) const = default;
};

struct Schema {
    std::vector<Relation> relations;  // kept sorted by name, names unique

    void add(const std::string& name, int arity);
    bool has(const std::string& name) const;
    int arity_of(const std::string& name) const;  // -1 if absent
    void validate() const;
    int max_arity() const;

    auto operator<=>(const Schema&) const = default;
};

Schema merge(const Schema& a, const Schema& b);

// ---------------------------------------------------------------- instances

struct Fact {
    std::string rel;
    std::vector<std::string> args;
    auto operator<=>(const Fact&) const = default;
};

struct Instance {
    Schema schema;
    std::set<Fact> facts;
    // Extra domain elements beyond those occurring in facts. Templates need
    // isolated elements; plain data instances leave this empty.
    std::set<std::string> extra_domain;

    std::set<std::string> adom() const;
    std::set<std::string> domain() const;  // adom + extra_domain
    void validate() const;
    bool empty() const { return facts.empty() && extra_domain.empty(); }

    auto operator<=>(const Instance&) const = default;
};

// Induced substructure on `keep`: facts whose constants all lie in keep.
Instance restrict_to(const Instance& inst, const std::set<std::string>& keep);

// Relabel constants; constants missing from the map are kept.
Instance rename_constants(const Instance& inst, const std::map<std::string, std::string>& m);

// Lexicographically minimal relabeling of adom to c0,c1,... (extra_domain
// elements included). Used for instance dedup up to isomorphism.
Instance canonical_instance(const Instance& inst);

// ---------------------------------------------------------------- rules

struct Term {
    std::string name;
    bool is_const = false;
    auto operator<=>(const Term&) const = default;
};

inline Term var(std::string n) { return Term{std::move(n), false}; }
inline Term cst(std::string n) { return Term{std::move(n), true}; }

struct Atom {
    std::string rel;
    std::vector<Term> args;
    auto operator<=>(const Atom&) const = default;
};

struct Rule {
    std::vector<Atom> head;  // possibly empty (constraint rule)
    std::vector<Atom> body;  // nonempty
    auto operator<=>(const Rule&) const = default;

    std::set<std::string> variables() const;
    int variable_occurrences() const;  // body occurrences only (rule size)
};

struct Program {
    Schema edb;
    Schema idb;  // includes goal
    std::vector<Rule> rules;
    int goal_arity = 0;
    int parameter_count = 0;
    std::vector<std::string> constants;  // declared constant pool
    std::string goal_name = "goal";

    bool is_idb(const std::string& r) const { return idb.has(r); }
    bool is_edb(const std::string& r) const { return edb.has(r); }
    bool is_boolean() const { return goal_arity == 0; }
    bool is_monadic() const;   // all non-goal IDBs have arity <= 1
    bool is_datalog() const;   // every head has exactly one atom
    int diameter() const;      // max variables per rule
    int rule_size() const;     // max variable occurrences per body
    int width() const;         // max non-goal IDB arity

    // strict_goal additionally enforces the surface-level goal discipline
    // (goal heads singleton and non-disjunctive). Internal pipeline stages
    // (biconnect) legitimately produce goal disjuncts, so they validate with
    // strict_goal = false.
    void validate(bool strict_goal = true) const;

    auto operator<=>(const Program&) const = default;
};

// true(x) sugar: replace every rule with body atom true(x) by all rules where
// it becomes R(x1..xn), x at one position, other variables fresh.
Program expand_true_sugar(const Program& p);

// ---------------------------------------------------------------- queries

struct ConjunctiveQuery {
    std::vector<std::string> answer_vars;  // repetitions allowed
    std::vector<Atom> atoms;
    auto operator<=>(const ConjunctiveQuery&) const = default;

    std::set<std::string> variables() const;
    // Canonical database: variables become constants.
    Instance canonical_db(const Schema& schema) const;
};

struct UnionQuery {
    std::vector<ConjunctiveQuery> disjuncts;  // nonempty, equal arity
    auto operator<=>(const UnionQuery&) const = default;
    int arity() const { return disjuncts.empty() ? 0 : (int)disjuncts[0].answer_vars.size(); }
    void validate() const;
};

// Canonical renaming x0,x1,... minimizing (sorted atoms, answer tuple) over
// variable bijections. Exact for <= 9 variables, greedy beyond.
ConjunctiveQuery canonical_cq(const ConjunctiveQuery& q);
Rule canonical_rule(const Rule& r);
UnionQuery canonical_ucq(const UnionQuery& q);

ConjunctiveQuery rename_vars(const ConjunctiveQuery& q, const std::map<std::string, std::string>& m);
Rule rename_vars(const Rule& r, const std::map<std::string, std::string>& m);

// ---------------------------------------------------------------- MMSNP

struct MmsnpImplication {
    std::vector<Atom> head;  // X_i(x_j) atoms only; empty = false
    std::vector<Atom> body;  // X_i(x_j) or R(xbar)
    auto operator<=>(const MmsnpImplication&) const = default;
};

struct MmsnpSentence {
    Schema schema;                      // EDB schema
    std::vector<std::string> so_vars;   // monadic second-order variables
    std::vector<std::string> fo_vars;
    std::vector<MmsnpImplication> implications;
    auto operator<=>(const MmsnpSentence&) const = default;

    int diameter() const;  // max variables per implication
    void validate() const;
};

// Complement translation: I |= sentence iff I |/= program, diameter preserved.
Program mmsnp_to_mddlog(const MmsnpSentence& s);
MmsnpSentence mddlog_to_mmsnp(const Program& p);

// ---------------------------------------------------------------- parsing

Program parse_program(const std::string& text);
Instance parse_instance(const std::string& text);
UnionQuery parse_ucq(const std::string& text);
MmsnpSentence parse_mmsnp(const std::string& text);

std::string render(const Program& p);
std::string render(const Instance& inst);
std::string render(const UnionQuery& q);
std::string render(const MmsnpSentence& s);
std::string render(const Atom& a);
std::string render(const Rule& r);
std::string render(const Fact& f);

}  // namespace mddlog
