#pragma once

#include "mddlog/core.hpp"
#include "mddlog/structure.hpp"

namespace mddlog {

// Close the program under consistent identification of variables in rules.
Program saturate_identifications(const Program& p);

// Equivalence-preserving rewriting making every rule body biconnected
// (splitting at cut variables / disconnected parts, isolating reflexive EDB
// atoms). Expects a saturated program.
Program biconnect(const Program& p);

struct SimpleForm {
    Program program;         // the simple program over the aggregation schema
    AggregationSchema agg;   // sidecar: R_q -> defining quantifier-free CQ
    int source_diameter = 0; // diameter of the input program
};

// Full pipeline: sugar expansion, saturation, biconnection, aggregation.
// Requires a Boolean program.
SimpleForm to_simple(const Program& p);

// Simple-form syntactic check (<= 1 EDB atom covering all body variables,
// each exactly once; EDB-free rules have <= 1 variable).
bool is_simple(const Program& p);

}  // namespace mddlog
