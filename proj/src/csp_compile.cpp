#include "mddlog/csp_compile.hpp"

#include <algorithm>
#include <cassert>

namespace mddlog {

namespace {

bool edb_free(const Program& p, const Rule& r) {
    for (auto& a : r.body)
        if (p.is_edb(a.rel) || a.rel == "true") return false;
    return true;
}

// all IDB relations of arity <= i except goal
std::vector<std::string> idbs_upto(const Program& p, int i) {
    std::vector<std::string> out;
    for (auto& r : p.idb.relations)
        if (r.name != p.goal_name && r.arity <= i) out.push_back(r.name);
    return out;
}

bool rule_within(const Program& p, const Rule& r, int i) {
    for (auto* part : {&r.head, &r.body})
        for (auto& a : *part) {
            if (a.rel == p.goal_name) continue;  // goal handled as unsatisfiable
            if (!p.is_idb(a.rel)) return false;
            if (p.idb.arity_of(a.rel) > i) return false;
        }
    return true;
}

}  // namespace

std::vector<std::set<std::string>> enumerate_types(const Program& p, int i) {
    auto symbols = idbs_upto(p, i);
    if (symbols.size() > 20) throw CapExceeded("enumerate_types: too many IDB relations");
    std::vector<Rule> filters;
    for (auto& r : p.rules)
        if (edb_free(p, r) && rule_within(p, r, i)) filters.push_back(r);

    std::vector<std::set<std::string>> out;
    for (uint64_t mask = 0; mask < (1ull << symbols.size()); ++mask) {
        std::set<std::string> t;
        for (size_t j = 0; j < symbols.size(); ++j)
            if (mask & (1ull << j)) t.insert(symbols[j]);
        // a type satisfies a rule when body membership forces some head
        // disjunct; all atoms are over a single variable (simple form) or
        // nullary, so membership is positional-independent
        bool ok = true;
        for (auto& r : filters) {
            bool body = true;
            for (auto& a : r.body) body &= t.count(a.rel) > 0;
            if (!body) continue;
            bool head = false;
            for (auto& a : r.head)
                head |= a.rel != p.goal_name && t.count(a.rel) > 0;
            if (!head) { ok = false; break; }
        }
        if (ok) out.push_back(t);
    }
    return out;
}

std::string type_element_name(const std::set<std::string>& one_type) {
    std::string s = "t";
    for (auto& x : one_type) s += "_" + x;
    return s;
}

TemplateSet build_templates(const Program& p) {
    if (!is_simple(p)) throw ValidationError("build_templates requires a simple program");
    if (!p.is_boolean()) throw ValidationError("build_templates requires a Boolean program");

    std::set<std::string> nullary, unary;
    for (auto& r : p.idb.relations) {
        if (r.name == p.goal_name) continue;
        if (r.arity == 0) nullary.insert(r.name);
        else unary.insert(r.name);
    }

    auto zero_types = enumerate_types(p, 0);
    auto one_types = enumerate_types(p, 1);

    // rules whose body has exactly one EDB atom, indexed by its relation
    struct EdbRule {
        const Rule* rule;
        const Atom* edb_atom;
    };
    std::map<std::string, std::vector<EdbRule>> rules_by_edb;
    for (auto& r : p.rules) {
        const Atom* e = nullptr;
        for (auto& a : r.body)
            if (p.is_edb(a.rel)) e = &a;
        if (e) rules_by_edb[e->rel].push_back({&r, e});
    }

    TemplateSet out;
    out.schema = p.edb;

    for (auto& theta : zero_types) {
        std::vector<std::set<std::string>> elems;
        for (auto& t : one_types) {
            std::set<std::string> tn;
            for (auto& x : t)
                if (nullary.count(x)) tn.insert(x);
            if (tn == theta) elems.push_back(t);
        }
        Instance T;
        T.schema = p.edb;
        TemplateProvenance prov;
        prov.zero_type = theta;
        for (auto& t : elems) {
            T.extra_domain.insert(type_element_name(t));
            std::set<std::string> un;
            for (auto& x : t)
                if (unary.count(x)) un.insert(x);
            prov.one_type[type_element_name(t)] = un;
        }
        // EDB facts: include R(t1..tn) unless some rule with EDB atom R and
        // satisfied IDB body has no satisfiable head disjunct
        auto satisfied = [&](const std::string& rel,
                             const std::map<std::string, const std::set<std::string>*>& of_var,
                             const std::set<std::string>& th, const EdbRule& er) {
            // position of each variable in the EDB atom
            (void)rel;
            for (auto& a : er.rule->body) {
                if (p.is_edb(a.rel)) continue;
                if (a.args.empty()) {
                    if (!th.count(a.rel)) return false;
                } else {
                    auto it = of_var.find(a.args[0].name);
                    assert(it != of_var.end());
                    if (!it->second->count(a.rel)) return false;
                }
            }
            return true;
        };
        auto head_ok = [&](const std::map<std::string, const std::set<std::string>*>& of_var,
                           const std::set<std::string>& th, const EdbRule& er) {
            for (auto& a : er.rule->head) {
                if (a.rel == p.goal_name) continue;  // unsatisfiable disjunct
                if (a.args.empty()) {
                    if (th.count(a.rel)) return true;
                } else if (of_var.at(a.args[0].name)->count(a.rel)) {
                    return true;
                }
            }
            return false;
        };
        for (auto& rel : p.edb.relations) {
            int n = rel.arity;
            std::vector<size_t> idx(n, 0);
            if (elems.empty() && n > 0) continue;
            for (;;) {
                bool include = true;
                for (auto& er : rules_by_edb[rel.name]) {
                    std::map<std::string, const std::set<std::string>*> of_var;
                    bool consistent = true;
                    for (int i = 0; i < n && consistent; ++i) {
                        const Term& t = er.edb_atom->args[i];
                        auto it = of_var.find(t.name);
                        if (it == of_var.end()) of_var[t.name] = &elems[idx[i]];
                        else consistent = it->second == &elems[idx[i]];
                    }
                    if (!consistent) continue;  // repeated vars cannot happen in simple form
                    if (satisfied(rel.name, of_var, theta, er) && !head_ok(of_var, theta, er)) {
                        include = false;
                        break;
                    }
                }
                if (include) {
                    Fact f{rel.name, {}};
                    for (int i = 0; i < n; ++i)
                        f.args.push_back(type_element_name(elems[idx[i]]));
                    T.facts.insert(f);
                }
                int i = 0;
                for (; i < n; ++i) {
                    if (++idx[i] < elems.size()) break;
                    idx[i] = 0;
                }
                if (i == n || n == 0) break;
            }
        }
        out.templates.push_back(T);
        out.provenance.push_back(prov);
    }

    // Thm 3.2(2) cardinality bounds hold by construction; check them anyway
    size_t m = (size_t)p.edb.max_arity();
    size_t exponent = m * (nullary.size() + unary.size());
    if (nullary.size() < 60 && out.templates.size() > (1ull << nullary.size()))
        throw ValidationError("template count exceeds 2^{|Sigma_I^0|}");
    if (exponent < 60) {
        size_t bound = std::max<size_t>(p.edb.relations.size(), 1) << exponent;
        for (auto& T : out.templates)
            if (T.facts.size() > bound)
                throw ValidationError("template size exceeds Thm 3.2 bound");
    }
    return out;
}

std::string render_template_set(const TemplateSet& s) {
    std::string out;
    for (size_t i = 0; i < s.templates.size(); ++i) {
        out += "% template " + std::to_string(i) + "\n";
        const Instance& t = s.templates[i];
        std::string schema_and_facts = render(t);
        // ensure the full domain is listed even when every element is in a fact
        out += schema_and_facts;
        out += "\n";
    }
    return out;
}

}  // namespace mddlog
