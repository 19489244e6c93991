#pragma once

#include <functional>

#include "mddlog/core.hpp"
#include "mddlog/structure.hpp"

namespace mddlog {

struct AnswerSet {
    int arity = 0;
    std::set<std::vector<std::string>> tuples;
    bool truth() const { return !tuples.empty(); }  // Boolean convenience
    auto operator<=>(const AnswerSet&) const = default;
};

struct EvalLimits {
    size_t max_ground_clauses = 2'000'000;
    size_t max_idb_facts = 200'000;
};

// Certain-answer semantics: a tuple is an answer iff goal holds in every
// extension of the instance to the IDB schema satisfying all rules.
AnswerSet eval_ddlog(const Program& p, const Instance& inst, const EvalLimits& lim = {});

// Least-fixpoint semantics for non-disjunctive programs; parameterized
// programs evaluate with parameter positions as ordinary positions.
AnswerSet eval_datalog(const Program& p, const Instance& inst, const EvalLimits& lim = {});

AnswerSet eval_ucq(const UnionQuery& q, const Instance& inst);

struct TemplateProvenance {
    std::set<std::string> zero_type;                       // nullary IDBs
    std::map<std::string, std::set<std::string>> one_type; // element -> unary IDBs
};

struct TemplateSet {
    Schema schema;
    std::vector<Instance> templates;
    std::vector<TemplateProvenance> provenance;  // parallel to templates (may be empty)
};

bool csp_holds(const Instance& inst, const TemplateSet& s);

// A query object that bounded_equivalence can evaluate.
struct EvaluableQuery {
    int arity = 0;
    std::string label;
    std::function<AnswerSet(const Instance&)> eval;
};

EvaluableQuery as_query(const Program& p, const EvalLimits& lim = {});
EvaluableQuery as_query(const UnionQuery& q);
EvaluableQuery cocsp_query(const TemplateSet& s);     // Boolean: no hom to any template
EvaluableQuery const_false_query(int arity);

// Enumerates instances over the schema with <= max_constants constants, one
// representative per isomorphism class, in a fixed canonical order (by
// constant count, then bit pattern). Callback returns false to stop.
void for_each_instance_upto_iso(const Schema& schema, int max_constants,
                                const std::function<bool(const Instance&)>& cb,
                                size_t bit_cap = 26);

struct EquivalenceResult {
    bool equivalent = true;
    int bound = 0;
    std::optional<Instance> counterexample;
    std::optional<std::vector<std::string>> witness_tuple;  // wrong on this tuple
    std::string detail;
};

EquivalenceResult bounded_equivalence(const EvaluableQuery& q1, const EvaluableQuery& q2,
                                      int max_constants, const Schema& schema);

}  // namespace mddlog
