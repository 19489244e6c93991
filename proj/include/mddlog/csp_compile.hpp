#pragma once

#include "mddlog/eval.hpp"
#include "mddlog/simplify.hpp"

namespace mddlog {

// i-types of a simple program: sets of IDB relations of arity <= i, without
// goal, satisfying every EDB-free rule over such relations.
std::vector<std::set<std::string>> enumerate_types(const Program& p, int i);

// Thm 3.2 / App A.2 template construction: one template per 0-type, elements
// named by their 1-types, EDB facts maximal subject to the rules (disjunctive
// heads allowed; goal counts as an unsatisfiable disjunct).
TemplateSet build_templates(const Program& p);

// Name of the template element for a 1-type.
std::string type_element_name(const std::set<std::string>& one_type);

// Export / import of templates through the shared instance format.
std::string render_template_set(const TemplateSet& s);

}  // namespace mddlog
