#include "mddlog/eval.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace mddlog {

// ------------------------------------------------------------ grounding

namespace {

struct GroundAtomTable {
    // interned (relation, tuple) -> variable id
    std::map<std::pair<std::string, std::vector<std::string>>, int> ids;
    std::vector<std::pair<std::string, std::vector<std::string>>> atoms;

    int intern(const std::string& rel, const std::vector<std::string>& args) {
        auto key = std::make_pair(rel, args);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        int id = (int)atoms.size();
        ids.emplace(key, id);
        atoms.push_back(key);
        return id;
    }
};

// Clause: negative IDB literals (body) -> positive IDB literals (head).
struct Clause {
    std::vector<int> neg, pos;
};

// Grounds the program over adom(inst): one clause per rule instantiation
// whose EDB part is satisfied. Sugar atom true(x) restricts x to adom.
struct Grounder {
    const Program& p;
    const Instance& inst;
    const EvalLimits& lim;
    GroundAtomTable table;
    std::vector<Clause> clauses;
    std::vector<std::string> dom;

    Grounder(const Program& p_, const Instance& inst_, const EvalLimits& lim_)
        : p(p_), inst(inst_), lim(lim_) {
        auto d = inst.adom();
        dom.assign(d.begin(), d.end());
    }

    void ground_rule(const Rule& r) {
        // split body into EDB-ish atoms (joined against facts) and IDB atoms
        std::vector<Atom> edb_atoms, idb_atoms;
        for (auto& a : r.body) {
            if (p.is_idb(a.rel)) idb_atoms.push_back(a);
            else edb_atoms.push_back(a);  // includes true(x) sugar
        }
        // expand true-sugar directly: true(x) just forces x into adom
        std::vector<Atom> join_atoms;
        std::vector<std::string> true_vars;
        for (auto& a : edb_atoms) {
            if (a.rel == "true") {
                if (!a.args[0].is_const) true_vars.push_back(a.args[0].name);
                continue;
            }
            join_atoms.push_back(a);
        }
        // remaining variables range over adom
        std::set<std::string> joined;
        for (auto& a : join_atoms)
            for (auto& t : a.args)
                if (!t.is_const) joined.insert(t.name);
        std::set<std::string> rest;
        for (auto& v : r.variables())
            if (!joined.count(v)) rest.insert(v);

        enumerate_matches(join_atoms, inst, {}, [&](const std::map<std::string, std::string>& m0) {
            std::vector<std::string> rv(rest.begin(), rest.end());
            std::vector<size_t> idx(rv.size(), 0);
            if (!rv.empty() && dom.empty()) return true;
            for (;;) {
                std::map<std::string, std::string> m = m0;
                for (size_t i = 0; i < rv.size(); ++i) m[rv[i]] = dom[idx[i]];
                emit_clause(r, idb_atoms, m);
                if (clauses.size() > lim.max_ground_clauses)
                    throw CapExceeded("eval_ddlog: ground clause cap exceeded");
                size_t i = 0;
                for (; i < rv.size(); ++i) {
                    if (++idx[i] < dom.size()) break;
                    idx[i] = 0;
                }
                if (i == rv.size()) break;
            }
            return true;
        });
    }

    std::vector<std::string> args_of(const Atom& a, const std::map<std::string, std::string>& m) {
        std::vector<std::string> out;
        for (auto& t : a.args) out.push_back(t.is_const ? t.name : m.at(t.name));
        return out;
    }

    void emit_clause(const Rule& r, const std::vector<Atom>& idb_atoms,
                     const std::map<std::string, std::string>& m) {
        Clause c;
        for (auto& a : idb_atoms) c.neg.push_back(table.intern(a.rel, args_of(a, m)));
        for (auto& a : r.head) c.pos.push_back(table.intern(a.rel, args_of(a, m)));
        clauses.push_back(std::move(c));
    }

    void run() {
        for (auto& r : p.rules) ground_rule(r);
    }
};

// Minimal DPLL with unit propagation; enough for desk-scale certain answers.
struct Dpll {
    int nvars;
    std::vector<Clause> clauses;

    bool satisfiable(const std::vector<int>& assumptions_false,
                     const std::vector<int>& assumptions_true = {}) {
        std::vector<int> val(nvars, -1);  // -1 unknown, 0 false, 1 true
        for (int v : assumptions_false) {
            if (val[v] == 1) return false;
            val[v] = 0;
        }
        for (int v : assumptions_true) {
            if (val[v] == 0) return false;
            val[v] = 1;
        }
        return solve(val);
    }

    bool solve(std::vector<int> val) {
        // unit propagation
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto& c : clauses) {
                int unassigned = -1;
                bool sat = false;
                int free_count = 0;
                bool unassigned_sign = true;
                for (int v : c.pos) {
                    if (val[v] == 1) { sat = true; break; }
                    if (val[v] == -1) { free_count++; unassigned = v; unassigned_sign = true; }
                }
                if (!sat)
                    for (int v : c.neg) {
                        if (val[v] == 0) { sat = true; break; }
                        if (val[v] == -1) { free_count++; unassigned = v; unassigned_sign = false; }
                    }
                if (sat) continue;
                if (free_count == 0) return false;  // conflict
                if (free_count == 1) {
                    val[unassigned] = unassigned_sign ? 1 : 0;
                    changed = true;
                }
            }
        }
        int pick = -1;
        for (int v = 0; v < nvars; ++v)
            if (val[v] == -1) { pick = v; break; }
        if (pick == -1) return true;
        auto v1 = val;
        v1[pick] = 0;  // prefer small models
        if (solve(std::move(v1))) return true;
        val[pick] = 1;
        return solve(std::move(val));
    }
};

std::vector<std::vector<std::string>> all_tuples(const std::vector<std::string>& dom, int n) {
    std::vector<std::vector<std::string>> out;
    if (n == 0) { out.push_back({}); return out; }
    if (dom.empty()) return out;
    std::vector<size_t> idx(n, 0);
    for (;;) {
        std::vector<std::string> t;
        for (int i = 0; i < n; ++i) t.push_back(dom[idx[i]]);
        out.push_back(t);
        int i = 0;
        for (; i < n; ++i) {
            if (++idx[i] < dom.size()) break;
            idx[i] = 0;
        }
        if (i == n) break;
    }
    return out;
}

}  // namespace

AnswerSet eval_ddlog(const Program& p, const Instance& inst, const EvalLimits& lim) {
    Grounder g(p, inst, lim);
    g.run();
    Dpll solver;
    // goal candidates must be interned before sizing the solver
    std::vector<std::string> dom(g.dom);
    auto candidates = all_tuples(dom, p.goal_arity);
    std::vector<int> goal_ids;
    for (auto& t : candidates) goal_ids.push_back(g.table.intern(p.goal_name, t));
    solver.nvars = (int)g.table.atoms.size();
    solver.clauses = g.clauses;
    AnswerSet out;
    out.arity = p.goal_arity;
    for (size_t i = 0; i < candidates.size(); ++i) {
        // certain iff clauses + (goal tuple false) is unsatisfiable
        if (!solver.satisfiable({goal_ids[i]})) out.tuples.insert(candidates[i]);
    }
    return out;
}

AnswerSet eval_datalog(const Program& p, const Instance& inst, const EvalLimits& lim) {
    if (!p.is_datalog()) throw ValidationError("eval_datalog: program is disjunctive");
    Instance state = inst;
    state.schema = merge(inst.schema, p.idb);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& r : p.rules) {
            // match body against current state; true(x) over original adom
            std::vector<Atom> atoms;
            std::vector<Term> true_terms;
            for (auto& a : r.body) {
                if (a.rel == "true") true_terms.push_back(a.args[0]);
                else atoms.push_back(a);
            }
            auto dom = inst.adom();
            std::vector<std::string> domv(dom.begin(), dom.end());
            enumerate_matches(atoms, state, {}, [&](const std::map<std::string, std::string>& m0) {
                // extend over unbound true-guarded variables
                std::vector<std::string> free;
                for (auto& t : true_terms)
                    if (!t.is_const && !m0.count(t.name)) free.push_back(t.name);
                std::sort(free.begin(), free.end());
                free.erase(std::unique(free.begin(), free.end()), free.end());
                for (auto& tup : all_tuples(domv, (int)free.size())) {
                    auto m = m0;
                    for (size_t i = 0; i < free.size(); ++i) m[free[i]] = tup[i];
                    const Atom& h = r.head.at(0);
                    Fact f{h.rel, {}};
                    for (auto& t : h.args) f.args.push_back(t.is_const ? t.name : m.at(t.name));
                    if (state.facts.insert(f).second) {
                        changed = true;
                        if (state.facts.size() > lim.max_idb_facts)
                            throw CapExceeded("eval_datalog: fact cap exceeded");
                    }
                }
                return true;
            });
        }
    }
    AnswerSet out;
    out.arity = p.goal_arity;
    for (auto& f : state.facts)
        if (f.rel == p.goal_name) out.tuples.insert(f.args);
    return out;
}

AnswerSet eval_ucq(const UnionQuery& q, const Instance& inst) {
    q.validate();
    AnswerSet out;
    out.arity = q.arity();
    for (auto& d : q.disjuncts) {
        enumerate_matches(d.atoms, inst, {}, [&](const std::map<std::string, std::string>& m) {
            std::vector<std::string> t;
            bool total = true;
            for (auto& v : d.answer_vars) {
                auto it = m.find(v);
                if (it == m.end()) { total = false; break; }
                t.push_back(it->second);
            }
            if (total) out.tuples.insert(t);
            return true;
        });
        // answer variables not occurring in atoms range over adom
        std::set<std::string> atom_vars;
        for (auto& a : d.atoms)
            for (auto& t : a.args)
                if (!t.is_const) atom_vars.insert(t.name);
        bool has_free_answer = false;
        for (auto& v : d.answer_vars) has_free_answer |= !atom_vars.count(v);
        if (has_free_answer) {
            auto dom = inst.adom();
            std::vector<std::string> domv(dom.begin(), dom.end());
            enumerate_matches(d.atoms, inst, {}, [&](const std::map<std::string, std::string>& m) {
                std::vector<int> free_pos;
                for (size_t i = 0; i < d.answer_vars.size(); ++i)
                    if (!m.count(d.answer_vars[i])) free_pos.push_back((int)i);
                for (auto& tup : all_tuples(domv, (int)free_pos.size())) {
                    std::vector<std::string> t;
                    auto m2 = m;
                    for (size_t i = 0; i < free_pos.size(); ++i)
                        m2[d.answer_vars[free_pos[i]]] = tup[i];
                    for (auto& v : d.answer_vars) t.push_back(m2.at(v));
                    out.tuples.insert(t);
                }
                return true;
            });
        }
    }
    return out;
}

bool csp_holds(const Instance& inst, const TemplateSet& s) {
    for (auto& t : s.templates) {
        if (inst.schema.relations != t.schema.relations)
            throw ValidationError("csp_holds: schema mismatch");
        if (maps_to(inst, t)) return true;
    }
    return false;
}

EvaluableQuery as_query(const Program& p, const EvalLimits& lim) {
    EvaluableQuery q;
    q.arity = p.goal_arity;
    q.label = p.is_datalog() ? "dlog" : "ddlog";
    q.eval = [p, lim](const Instance& inst) {
        return p.is_datalog() ? eval_datalog(p, inst, lim) : eval_ddlog(p, inst, lim);
    };
    return q;
}

EvaluableQuery as_query(const UnionQuery& u) {
    EvaluableQuery q;
    q.arity = u.arity();
    q.label = "ucq";
    q.eval = [u](const Instance& inst) { return eval_ucq(u, inst); };
    return q;
}

EvaluableQuery cocsp_query(const TemplateSet& s) {
    EvaluableQuery q;
    q.arity = 0;
    q.label = "cocsp";
    q.eval = [s](const Instance& inst) {
        AnswerSet a;
        a.arity = 0;
        if (!csp_holds(inst, s)) a.tuples.insert(std::vector<std::string>{});
        return a;
    };
    return q;
}

EvaluableQuery const_false_query(int arity) {
    EvaluableQuery q;
    q.arity = arity;
    q.label = "false";
    q.eval = [arity](const Instance&) { return AnswerSet{arity, {}}; };
    return q;
}

// ---------------------------------------------------- instance enumeration

namespace {

struct FactPosition {
    std::string rel;
    std::vector<int> tuple;  // indices into 0..n-1
};

std::vector<FactPosition> fact_positions(const Schema& schema, int n) {
    std::vector<FactPosition> out;
    for (auto& r : schema.relations) {
        if (r.arity > 0 && n == 0) continue;
        std::vector<int> idx(r.arity, 0);
        for (;;) {
            out.push_back({r.name, idx});
            int i = 0;
            for (; i < r.arity; ++i) {
                if (++idx[i] < n) break;
                idx[i] = 0;
            }
            if (i == r.arity || r.arity == 0) break;
        }
    }
    return out;
}

}  // namespace

void for_each_instance_upto_iso(const Schema& schema, int max_constants,
                                const std::function<bool(const Instance&)>& cb,
                                size_t bit_cap) {
    for (int n = 0; n <= max_constants; ++n) {
        auto positions = fact_positions(schema, n);
        size_t bits = positions.size();
        if (bits > bit_cap) throw CapExceeded("instance enumeration: too many fact positions");
        // permutation action on bit positions
        std::vector<int> perm(n);
        std::vector<std::vector<int>> perm_maps;
        std::iota(perm.begin(), perm.end(), 0);
        std::map<std::pair<std::string, std::vector<int>>, int> pos_index;
        for (size_t i = 0; i < positions.size(); ++i)
            pos_index[{positions[i].rel, positions[i].tuple}] = (int)i;
        do {
            std::vector<int> pm(bits);
            for (size_t i = 0; i < bits; ++i) {
                std::vector<int> t;
                for (int x : positions[i].tuple) t.push_back(perm[x]);
                pm[i] = pos_index.at({positions[i].rel, t});
            }
            perm_maps.push_back(pm);
        } while (std::next_permutation(perm.begin(), perm.end()));

        auto apply = [&](uint64_t mask, const std::vector<int>& pm) {
            uint64_t out = 0;
            uint64_t m = mask;
            while (m) {
                int b = __builtin_ctzll(m);
                out |= 1ull << pm[b];
                m &= m - 1;
            }
            return out;
        };

        // which constants a mask uses
        std::vector<uint64_t> uses(bits, 0);
        for (size_t i = 0; i < bits; ++i)
            for (int x : positions[i].tuple) uses[i] |= 1ull << x;
        uint64_t full = n == 0 ? 0 : (1ull << n) - 1;

        for (uint64_t mask = 0; mask < (1ull << bits); ++mask) {
            if (n > 0) {
                uint64_t u = 0;
                uint64_t m = mask;
                while (m) {
                    u |= uses[__builtin_ctzll(m)];
                    m &= m - 1;
                }
                if (u != full) continue;  // smaller n covers it
            } else if (bits == 0 && mask > 0) {
                break;
            }
            bool canonical = true;
            for (auto& pm : perm_maps) {
                if (apply(mask, pm) < mask) { canonical = false; break; }
            }
            if (!canonical) continue;
            Instance inst;
            inst.schema = schema;
            for (size_t i = 0; i < bits; ++i)
                if (mask & (1ull << i)) {
                    Fact f{positions[i].rel, {}};
                    for (int x : positions[i].tuple) f.args.push_back("c" + std::to_string(x));
                    inst.facts.insert(f);
                }
            if (!cb(inst)) return;
            if (bits == 0) break;  // only the empty mask exists
        }
    }
}

EquivalenceResult bounded_equivalence(const EvaluableQuery& q1, const EvaluableQuery& q2,
                                      int max_constants, const Schema& schema) {
    if (q1.arity != q2.arity) throw ValidationError("bounded_equivalence: arity mismatch");
    EquivalenceResult res;
    res.bound = max_constants;
    for_each_instance_upto_iso(schema, max_constants, [&](const Instance& inst) {
        AnswerSet a = q1.eval(inst), b = q2.eval(inst);
        if (a != b) {
            res.equivalent = false;
            res.counterexample = inst;
            // first differing tuple in canonical order
            std::vector<std::vector<std::string>> diff;
            std::set_symmetric_difference(a.tuples.begin(), a.tuples.end(), b.tuples.begin(),
                                          b.tuples.end(), std::back_inserter(diff));
            if (!diff.empty()) res.witness_tuple = diff.front();
            res.detail = q1.label + " vs " + q2.label + " disagree";
            return false;
        }
        return true;
    });
    return res;
}

}  // namespace mddlog
