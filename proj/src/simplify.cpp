#include "mddlog/simplify.hpp"

#include <algorithm>
#include <functional>

namespace mddlog {

namespace {

// set partitions of vars as restricted growth strings -> identification maps
std::vector<std::map<std::string, std::string>> identification_maps(
    const std::set<std::string>& vars) {
    std::vector<std::string> v(vars.begin(), vars.end());
    std::vector<std::map<std::string, std::string>> out;
    std::vector<int> rgs(v.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int maxb) {
        if (i == v.size()) {
            std::map<std::string, std::string> m;
            for (size_t j = 0; j < v.size(); ++j) {
                // representative: first variable of the block
                for (size_t k = 0; k <= j; ++k)
                    if (rgs[k] == rgs[j]) { m[v[j]] = v[k]; break; }
            }
            out.push_back(m);
            return;
        }
        for (int b = 0; b <= maxb + 1; ++b) {
            rgs[i] = b;
            rec(i + 1, std::max(maxb, b));
        }
    };
    rec(0, -1);
    return out;
}

}  // namespace

Program saturate_identifications(const Program& p) {
    Program out = p;
    std::set<Rule> seen;
    std::vector<Rule> rules;
    for (auto& r : p.rules) {
        for (auto& m : identification_maps(r.variables())) {
            Rule c = canonical_rule(rename_vars(r, m));
            if (seen.insert(c).second) rules.push_back(c);
        }
    }
    out.rules = rules;
    return out;
}

namespace {

std::set<std::string> atom_vars(const Atom& a) {
    std::set<std::string> v;
    for (auto& t : a.args)
        if (!t.is_const) v.insert(t.name);
    return v;
}

std::set<std::string> atoms_vars(const std::vector<Atom>& atoms) {
    std::set<std::string> v;
    for (auto& a : atoms) {
        auto av = atom_vars(a);
        v.insert(av.begin(), av.end());
    }
    return v;
}

// connected components of atoms under shared variables
std::vector<std::vector<int>> atom_components(const std::vector<Atom>& atoms) {
    size_t n = atoms.size();
    std::vector<int> comp(n, -1);
    int nc = 0;
    for (size_t i = 0; i < n; ++i) {
        if (comp[i] >= 0) continue;
        comp[i] = nc;
        std::vector<size_t> stack{i};
        while (!stack.empty()) {
            size_t u = stack.back();
            stack.pop_back();
            auto uv = atom_vars(atoms[u]);
            for (size_t w = 0; w < n; ++w) {
                if (comp[w] >= 0) continue;
                auto wv = atom_vars(atoms[w]);
                bool share = false;
                for (auto& x : uv) share |= wv.count(x) > 0;
                if (share) { comp[w] = nc; stack.push_back(w); }
            }
        }
        nc++;
    }
    std::vector<std::vector<int>> out(nc);
    for (size_t i = 0; i < n; ++i) out[comp[i]].push_back((int)i);
    return out;
}

struct Split {
    std::vector<Atom> q1, q2;
    std::optional<std::string> shared;  // cut variable for the first bullet
};

// Finds a bullet-1 or bullet-2 split of the body, if any: either two parts
// sharing no variables (both with at least one variable), or two parts
// sharing exactly one variable with both containing other variables.
std::optional<Split> find_split(const std::vector<Atom>& body) {
    std::vector<Atom> varless, varful;
    for (auto& a : body)
        (atom_vars(a).empty() ? varless : varful).push_back(a);
    if (varful.size() >= 2) {
        auto comps = atom_components(varful);
        if (comps.size() >= 2) {
            Split s;
            for (int i : comps[0]) s.q1.push_back(varful[i]);
            for (size_t c = 1; c < comps.size(); ++c)
                for (int i : comps[c]) s.q2.push_back(varful[i]);
            for (auto& a : varless) s.q2.push_back(a);
            return s;
        }
    }
    auto vars = atoms_vars(varful);
    for (auto& x : vars) {
        std::vector<Atom> without, with_x;
        for (auto& a : varful)
            (atom_vars(a).count(x) ? with_x : without).push_back(a);
        if (without.empty()) continue;
        auto comps = atom_components(without);
        if (comps.size() < 2) continue;
        // side 1 = first component; x-atoms join the side they share a non-x
        // variable with; an x-atom bridging both sides means x is no cut here
        std::vector<Atom> q1, q2;
        for (int i : comps[0]) q1.push_back(without[i]);
        for (size_t c = 1; c < comps.size(); ++c)
            for (int i : comps[c]) q2.push_back(without[i]);
        bool clean = true;
        for (auto& a : with_x) {
            auto av = atom_vars(a);
            av.erase(x);
            auto v1 = atoms_vars(q1), v2 = atoms_vars(q2);
            bool in1 = false, in2 = false;
            for (auto& y : av) {
                in1 |= v1.count(y) > 0;
                in2 |= v2.count(y) > 0;
            }
            if (in1 && in2) { clean = false; break; }
            (in1 ? q1 : q2).push_back(a);
        }
        if (!clean) continue;
        auto s1 = atoms_vars(q1), s2 = atoms_vars(q2);
        std::vector<std::string> inter;
        std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(),
                              std::back_inserter(inter));
        if (inter.size() != 1 || inter[0] != x) continue;
        if (s1.size() < 2 || s2.size() < 2) continue;  // both need other variables
        Split s;
        s.q1 = q1;
        s.q2 = q2;
        for (auto& a : varless) s.q2.push_back(a);
        s.shared = x;
        return s;
    }
    return std::nullopt;
}

// head restriction: atoms that are nullary or contain a variable of vs
std::vector<Atom> head_restrict(const std::vector<Atom>& head,
                                const std::set<std::string>& vs) {
    std::vector<Atom> out;
    for (auto& a : head) {
        auto av = atom_vars(a);
        if (av.empty()) { out.push_back(a); continue; }
        for (auto& x : av)
            if (vs.count(x)) { out.push_back(a); break; }
    }
    return out;
}

bool is_reflexive_edb(const Program& p, const Atom& a) {
    if (!p.is_edb(a.rel) || a.args.size() < 2) return false;
    for (auto& t : a.args)
        if (t != a.args[0] || t.is_const) return false;
    return true;
}

}  // namespace

Program biconnect(const Program& p) {
    Program out = p;
    std::vector<Rule> work = p.rules;
    std::vector<Rule> done;
    int fresh = 0;
    auto fresh_idb = [&](int arity) {
        std::string name = "Q_split_" + std::to_string(fresh++);
        out.idb.add(name, arity);
        return name;
    };
    while (!work.empty()) {
        Rule r = work.back();
        work.pop_back();
        // third step: a reflexive EDB atom may not share a body with other
        // EDB atoms
        int refl = -1, edb_count = 0;
        for (size_t i = 0; i < r.body.size(); ++i) {
            if (out.is_edb(r.body[i].rel)) edb_count++;
            if (refl < 0 && is_reflexive_edb(out, r.body[i])) refl = (int)i;
        }
        if (refl >= 0 && edb_count >= 2) {
            Atom ra = r.body[refl];
            std::string x = ra.args[0].name;
            std::string q = fresh_idb(1);
            Rule r1;
            r1.head = {{q, {var(x)}}};
            r1.body = {ra};
            Rule r2 = r;
            r2.body[refl] = {q, {var(x)}};
            work.push_back(r1);
            work.push_back(r2);
            continue;
        }
        auto split = find_split(r.body);
        if (!split) {
            done.push_back(r);
            continue;
        }
        auto v1 = atoms_vars(split->q1), v2 = atoms_vars(split->q2);
        Rule r1, r2;
        r1.head = head_restrict(r.head, v1);
        r1.body = split->q1;
        r2.head = head_restrict(r.head, v2);
        r2.body = split->q2;
        if (split->shared) {
            std::string q = fresh_idb(1);
            r1.head.push_back({q, {var(*split->shared)}});
            r2.body.push_back({q, {var(*split->shared)}});
        } else {
            std::string q = fresh_idb(0);
            r1.head.push_back({q, {}});
            r2.body.push_back({q, {}});
        }
        work.push_back(r1);
        work.push_back(r2);
    }
    std::set<Rule> seen;
    out.rules.clear();
    for (auto& r : done) {
        Rule c = canonical_rule(r);
        if (seen.insert(c).second) out.rules.push_back(c);
    }
    std::sort(out.rules.begin(), out.rules.end());
    return out;
}

bool is_simple(const Program& p) {
    for (auto& r : p.rules) {
        std::vector<const Atom*> edb;
        for (auto& a : r.body)
            if (p.is_edb(a.rel) || a.rel == "true") edb.push_back(&a);
        auto vars = atoms_vars(r.body);
        if (edb.empty()) {
            if (vars.size() > 1) return false;
            continue;
        }
        if (edb.size() > 1) return false;
        std::set<std::string> seen;
        for (auto& t : edb[0]->args) {
            if (t.is_const) return false;
            if (!seen.insert(t.name).second) return false;  // repeated variable
        }
        if (seen != vars) return false;
    }
    return true;
}

SimpleForm to_simple(const Program& p0) {
    if (!p0.is_boolean()) throw ValidationError("to_simple requires a Boolean program");
    Program p = biconnect(saturate_identifications(expand_true_sugar(p0)));

    SimpleForm out;
    out.source_diameter = p0.diameter();
    out.agg.base = p.edb;

    auto edb_part = [&](const Rule& r) {
        std::vector<Atom> e;
        for (auto& a : r.body)
            if (p.is_edb(a.rel)) e.push_back(a);
        return e;
    };
    auto as_cq = [&](const std::vector<Atom>& atoms) {
        ConjunctiveQuery q;
        auto vs = atoms_vars(atoms);
        q.answer_vars.assign(vs.begin(), vs.end());
        q.atoms = atoms;
        return canonical_cq(q);
    };
    for (auto& r : p.rules) {
        auto e = edb_part(r);
        if (!e.empty()) out.agg.add(as_cq(e));
    }

    Program s;
    s.edb = out.agg.agg;
    s.idb = p.idb;
    s.goal_arity = 0;
    std::set<Rule> seen;
    for (auto& r : p.rules) {
        auto e = edb_part(r);
        if (e.empty()) {
            Rule c = canonical_rule(r);
            if (seen.insert(c).second) s.rules.push_back(c);
            continue;
        }
        // for every aggregation CQ q2 and hom sigma : (EDB part of r) -> q2,
        // emit  sigma(head) <- R_q2(xbar) /\ sigma(IDB part of r)
        for (auto& [rel, q2] : out.agg.defining) {
            Instance q2db = q2.canonical_db(out.agg.base);
            enumerate_matches(e, q2db, {}, [&](const std::map<std::string, std::string>& sigma) {
                Rule nr;
                Atom agg_atom{rel, {}};
                for (auto& v : q2.answer_vars) agg_atom.args.push_back(var(v));
                nr.body.push_back(agg_atom);
                auto subst = [&](const Atom& a) {
                    Atom b{a.rel, {}};
                    for (auto& t : a.args)
                        b.args.push_back(t.is_const ? t : var(sigma.at(t.name)));
                    return b;
                };
                for (auto& a : r.body)
                    if (!p.is_edb(a.rel)) nr.body.push_back(subst(a));
                for (auto& a : r.head) nr.head.push_back(subst(a));
                Rule c = canonical_rule(nr);
                if (seen.insert(c).second) s.rules.push_back(c);
                return true;
            });
        }
    }
    std::sort(s.rules.begin(), s.rules.end());
    out.program = s;
    out.program.validate(false);
    if (!is_simple(out.program))
        throw ValidationError("to_simple: output is not simple");
    return out;
}

}  // namespace mddlog
