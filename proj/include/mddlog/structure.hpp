#pragma once

#include <cstdint>
#include <functional>

#include "mddlog/core.hpp"

namespace mddlog {

// ------------------------------------------------------------ homomorphisms

// Total maps adom(src) -> domain(tgt) preserving all facts and extending
// anchor. Complete backtracking search; nullopt means none exists.
std::optional<std::map<std::string, std::string>> find_homomorphism(
    const Instance& src, const Instance& tgt,
    const std::map<std::string, std::string>& anchor = {});

bool maps_to(const Instance& src, const Instance& tgt);

// All assignments of the atoms' variables into inst making every atom a fact;
// constant terms must match literally. Callback returns false to stop.
void enumerate_matches(const std::vector<Atom>& atoms, const Instance& inst,
                       const std::map<std::string, std::string>& fixed,
                       const std::function<bool(const std::map<std::string, std::string>&)>& cb);

// Core: induced substructure hom-equivalent to the input with no proper
// self-retraction; unique up to isomorphism. domain_cap bounds |adom|.
Instance compute_core(const Instance& inst, size_t domain_cap = 10);

// ------------------------------------------------------------------- girth

constexpr int kGirthOmega = -1;  // instance is a tree

// Length of the shortest cycle under the fact/position definition;
// kGirthOmega if none.
int girth(const Instance& inst);
inline bool is_tree(const Instance& inst) { return girth(inst) == kGirthOmega; }
inline bool girth_exceeds(const Instance& inst, int g) {
    int gi = girth(inst);
    return gi == kGirthOmega || gi > g;
}

// ---------------------------------------------------------- decompositions

struct TreeDecomposition {
    // node 0 is the root; parent[0] == -1
    std::vector<int> parent;
    std::vector<std::set<std::string>> bags;
    int overlap_bound = 0;  // l
    int bag_bound = 0;      // k

    void validate_for(const Instance& inst) const;
};

// Exact search for an (l,k)-tree decomposition; when marks are given the
// bounds become (l+m, k+m) with every bag containing all marks (m = number of
// distinct marks). element_cap guards the exponential search.
std::optional<TreeDecomposition> find_lk_decomposition(
    const Instance& inst, int l, int k,
    const std::vector<std::string>& marks = {}, size_t element_cap = 12);

// Generic enumeration over an abstract hypergraph (elements + scopes). Used
// both for instance decompositions and for rule-body decompositions. The
// callback may return false to stop.
struct Hypergraph {
    std::vector<std::string> elements;
    std::vector<std::vector<std::string>> scopes;  // each must be covered by a bag
};

void enumerate_tree_decompositions(
    const Hypergraph& h, int l, int k, const std::vector<std::string>& marks,
    const std::function<bool(const TreeDecomposition&)>& cb, size_t element_cap = 12);

struct MarkedInstance {
    Instance instance;
    std::vector<std::string> marks;
    auto operator<=>(const MarkedInstance&) const = default;
};

struct OneKDecomposition {
    std::vector<std::set<Fact>> parts;
    int bound = 0;
};

// Supremum of girth(I_D) over all (1,k)-decompositions D; kGirthOmega iff the
// instance has treewidth (1,k).
int one_k_decomposition_girth(const Instance& inst, int k, size_t fact_cap = 10);

// ------------------------------------------------------------- aggregation

// Aggregation schema: relations R_q named by quantifier-free CQs over the
// base schema; arity = number of variables of q.
struct AggregationSchema {
    Schema base;
    Schema agg;                                        // the R_q relations
    std::map<std::string, ConjunctiveQuery> defining;  // R_q name -> q (canonical)

    std::string relation_for(const ConjunctiveQuery& q) const;  // "" if absent
    std::string add(const ConjunctiveQuery& q);                 // returns name
};

Instance to_aggregation_instance(const Instance& base, const AggregationSchema& agg);
Instance from_aggregation_instance(const Instance& aggInst, const AggregationSchema& agg);

// ---------------------------------------------------- power / square / lift

// Power structure over nonempty subsets of adom(T): R(S1..Sn) iff for each i
// and each a in Si there is a tuple of R through a with j-th component in Sj.
Instance power_structure(const Instance& t, size_t domain_cap = 12);

// Square over domain(T)^2 with componentwise tuples.
Instance square(const Instance& t, size_t domain_cap = 64);

// Girth explosion (randomized lift, verified): returns I' with girth > g,
// a homomorphism I' -> I, and I -> T iff I' -> T for every supplied target.
struct ExplosionResult {
    Instance instance;
    std::map<std::string, std::string> hom_to_input;
    int attempts = 0;
};

ExplosionResult explode_girth(const Instance& inst, int g,
                              const std::vector<Instance>& targets,
                              uint64_t seed = 1, int attempt_budget = 1000);

}  // namespace mddlog
