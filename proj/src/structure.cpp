#include "mddlog/structure.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <random>

namespace mddlog {

// ------------------------------------------------------------ homomorphisms

namespace {

// Order facts so that each one shares elements with the prefix when possible.
std::vector<const Fact*> connectivity_order(const Instance& inst) {
    std::vector<const Fact*> facts;
    for (auto& f : inst.facts) facts.push_back(&f);
    std::vector<const Fact*> out;
    std::set<std::string> seen;
    std::vector<bool> used(facts.size(), false);
    for (size_t round = 0; round < facts.size(); ++round) {
        int pick = -1;
        for (size_t i = 0; i < facts.size(); ++i) {
            if (used[i]) continue;
            bool touches = false;
            for (auto& a : facts[i]->args) touches |= seen.count(a) > 0;
            if (touches) { pick = (int)i; break; }
            if (pick < 0) pick = (int)i;
        }
        used[pick] = true;
        out.push_back(facts[pick]);
        for (auto& a : facts[pick]->args) seen.insert(a);
    }
    return out;
}

struct HomSearch {
    const Instance& tgt;
    std::vector<const Fact*> facts;
    std::vector<std::string> tgt_domain;
    std::map<std::string, std::vector<Fact>> tgt_by_rel;
    std::map<std::string, std::string> assign;

    HomSearch(const Instance& src, const Instance& tgt_) : tgt(tgt_) {
        facts = connectivity_order(src);
        auto d = tgt.domain();
        tgt_domain.assign(d.begin(), d.end());
        for (auto& f : tgt.facts) tgt_by_rel[f.rel].push_back(f);
    }

    bool extend(size_t fi) {
        if (fi == facts.size()) return true;
        const Fact& f = *facts[fi];
        for (auto& cand : tgt_by_rel[f.rel]) {
            std::vector<std::pair<std::string, std::string>> added;
            bool ok = true;
            for (size_t i = 0; i < f.args.size() && ok; ++i) {
                auto it = assign.find(f.args[i]);
                if (it != assign.end()) {
                    ok = it->second == cand.args[i];
                } else {
                    assign[f.args[i]] = cand.args[i];
                    added.push_back({f.args[i], cand.args[i]});
                }
            }
            if (ok && extend(fi + 1)) return true;
            for (auto& [k, v] : added) assign.erase(k);
        }
        return false;
    }
};

}  // namespace

std::optional<std::map<std::string, std::string>> find_homomorphism(
    const Instance& src, const Instance& tgt,
    const std::map<std::string, std::string>& anchor) {
    auto sdom = src.domain();
    auto tdom = tgt.domain();
    for (auto& [k, v] : anchor) {
        if (!sdom.count(k)) throw ValidationError("anchor mentions unknown source constant " + k);
        if (!tdom.count(v)) throw ValidationError("anchor mentions unknown target constant " + v);
    }
    if (!src.facts.empty() && tdom.empty()) return std::nullopt;
    HomSearch s(src, tgt);
    s.assign = anchor;
    // anchored values must be consistent with facts; extend checks that
    if (!s.extend(0)) return std::nullopt;
    // isolated domain elements map anywhere
    for (auto& c : sdom)
        if (!s.assign.count(c)) {
            if (s.tgt_domain.empty()) return std::nullopt;
            s.assign[c] = s.tgt_domain.front();
        }
    return s.assign;
}

bool maps_to(const Instance& src, const Instance& tgt) {
    return find_homomorphism(src, tgt).has_value();
}

Instance compute_core(const Instance& inst0, size_t domain_cap) {
    if (inst0.domain().size() > domain_cap)
        throw CapExceeded("compute_core: domain exceeds cap");
    Instance inst = inst0;
    bool changed = true;
    while (changed) {
        changed = false;
        auto dom = inst.domain();
        for (auto& a : dom) {
            std::set<std::string> keep = dom;
            keep.erase(a);
            Instance sub = restrict_to(inst, keep);
            sub.extra_domain = keep;  // keep elements that became isolated
            // fast pass: anchored retraction fixing everything else
            std::map<std::string, std::string> anchor;
            for (auto& c : keep) anchor[c] = c;
            auto h = find_homomorphism(inst, sub, anchor);
            if (!h) h = find_homomorphism(inst, sub);  // any endomorphism missing a
            if (h) {
                std::set<std::string> image;
                for (auto& [k, v] : *h) image.insert(v);
                inst = restrict_to(inst, image);
                changed = true;
                break;
            }
        }
    }
    return inst;
}

// ------------------------------------------------------------------- girth

namespace {

struct IncidenceGraph {
    // bipartite: vertices 0..F-1 facts, F..F+C-1 constants
    int nfacts = 0;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbor, edge id)
    int nedges = 0;
};

IncidenceGraph build_incidence(const Instance& inst) {
    IncidenceGraph g;
    std::vector<const Fact*> facts;
    for (auto& f : inst.facts) facts.push_back(&f);
    g.nfacts = (int)facts.size();
    std::map<std::string, int> cid;
    for (auto& f : inst.facts)
        for (auto& a : f.args)
            if (!cid.count(a)) cid[a] = g.nfacts + (int)cid.size();
    g.adj.resize(g.nfacts + cid.size());
    for (int fi = 0; fi < g.nfacts; ++fi)
        for (auto& a : facts[fi]->args) {
            int cv = cid[a];
            g.adj[fi].push_back({cv, g.nedges});
            g.adj[cv].push_back({fi, g.nedges});
            g.nedges++;
        }
    return g;
}

// Shortest cycle length in the multigraph, with an optional witness of the
// fact-vertices on one shortest cycle. Returns -1 when acyclic.
int multigraph_girth(const IncidenceGraph& g, std::vector<int>* witness) {
    int best = -1;
    int n = (int)g.adj.size();
    std::vector<int> dist(n), par_edge(n), par(n);
    for (int root = 0; root < n; ++root) {
        std::fill(dist.begin(), dist.end(), -1);
        std::vector<int> queue{root};
        dist[root] = 0;
        par_edge[root] = -1;
        par[root] = -1;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int u = queue[qi];
            if (best >= 0 && 2 * dist[u] >= best) continue;
            for (auto [w, eid] : g.adj[u]) {
                if (eid == par_edge[u]) continue;
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    par_edge[w] = eid;
                    par[w] = u;
                    queue.push_back(w);
                } else {
                    int len = dist[u] + dist[w] + 1;
                    if (best < 0 || len < best) {
                        best = len;
                        if (witness) {
                            witness->clear();
                            for (int x : {u, w})
                                for (int y = x; y >= 0; y = par[y])
                                    if (y < g.nfacts) witness->push_back(y);
                        }
                    }
                }
            }
        }
    }
    return best;
}

}  // namespace

namespace detail {
int girth_with_witness(const Instance& inst, std::vector<Fact>* cycle_facts) {
    auto g = build_incidence(inst);
    std::vector<int> wit;
    int len = multigraph_girth(g, cycle_facts ? &wit : nullptr);
    if (len < 0) return kGirthOmega;
    if (cycle_facts) {
        std::vector<const Fact*> facts;
        for (auto& f : inst.facts) facts.push_back(&f);
        std::set<int> uniq(wit.begin(), wit.end());
        cycle_facts->clear();
        for (int fi : uniq) cycle_facts->push_back(*facts[fi]);
    }
    return len / 2;
}
}  // namespace detail

int girth(const Instance& inst) { return detail::girth_with_witness(inst, nullptr); }

// ---------------------------------------------------------- decompositions

void TreeDecomposition::validate_for(const Instance& inst) const {
    if (bags.empty()) throw ValidationError("empty decomposition");
    // every fact covered
    for (auto& f : inst.facts) {
        bool ok = false;
        for (auto& b : bags) {
            bool in = true;
            for (auto& a : f.args) in &= b.count(a) > 0;
            ok |= in;
        }
        if (!ok) throw ValidationError("fact not covered: " + render(f));
    }
    // bounds
    for (size_t i = 0; i < bags.size(); ++i) {
        if ((int)bags[i].size() > bag_bound) throw ValidationError("bag too large");
        for (size_t j = i + 1; j < bags.size(); ++j) {
            std::vector<std::string> inter;
            std::set_intersection(bags[i].begin(), bags[i].end(), bags[j].begin(),
                                  bags[j].end(), std::back_inserter(inter));
            if ((int)inter.size() > overlap_bound)
                throw ValidationError("bag overlap too large");
        }
    }
    // connectivity: the nodes containing an element form a subtree iff
    // exactly one of them has its parent outside the set
    std::set<std::string> all;
    for (auto& b : bags) all.insert(b.begin(), b.end());
    for (auto& x : all) {
        std::set<int> nodes;
        for (size_t i = 0; i < bags.size(); ++i)
            if (bags[i].count(x)) nodes.insert((int)i);
        int tops = 0;
        for (int v : nodes)
            if (parent[v] == -1 || !nodes.count(parent[v])) tops++;
        if (tops != 1) throw ValidationError("element nodes disconnected: " + x);
    }
}

namespace {

struct DecompSearch {
    std::vector<std::string> elems;
    std::vector<std::set<std::string>> scopes;
    std::set<std::string> marks;
    int l_eff, k_eff;
    const std::function<bool(const TreeDecomposition&)>& cb;
    std::vector<std::set<std::string>> candidate_bags;
    std::vector<int> parent;
    std::vector<std::set<std::string>> bags;
    std::set<std::string> used;
    size_t work = 0, work_cap;
    bool stopped = false;

    DecompSearch(const Hypergraph& h, int l, int k, const std::vector<std::string>& marks_,
                 const std::function<bool(const TreeDecomposition&)>& cb_, size_t cap)
        : cb(cb_), work_cap(cap) {
        elems = h.elements;
        std::sort(elems.begin(), elems.end());
        elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
        for (auto& s : h.scopes) scopes.emplace_back(s.begin(), s.end());
        marks.insert(marks_.begin(), marks_.end());
        l_eff = l + (int)marks.size();
        k_eff = k + (int)marks.size();
        if (elems.size() > 20) throw CapExceeded("decomposition search: too many elements");
        gen_bags();
    }

    void gen_bags() {
        // all subsets containing the marks with size <= k_eff
        std::vector<std::string> rest;
        for (auto& e : elems)
            if (!marks.count(e)) rest.push_back(e);
        int extra = k_eff - (int)marks.size();
        if (extra < 0) return;
        std::vector<std::string> cur;
        std::function<void(size_t)> rec = [&](size_t i) {
            if ((int)cur.size() <= extra && (cur.size() + marks.size()) > 0) {
                std::set<std::string> b(marks.begin(), marks.end());
                b.insert(cur.begin(), cur.end());
                if (!b.empty()) candidate_bags.push_back(b);
            }
            if (i == rest.size() || (int)cur.size() == extra) return;
            for (size_t j = i; j < rest.size(); ++j) {
                cur.push_back(rest[j]);
                rec(j + 1);
                cur.pop_back();
            }
        };
        rec(0);
        std::sort(candidate_bags.begin(), candidate_bags.end());
        candidate_bags.erase(std::unique(candidate_bags.begin(), candidate_bags.end()),
                             candidate_bags.end());
    }

    bool covered(const std::set<std::string>& scope) const {
        for (auto& b : bags) {
            bool in = true;
            for (auto& x : scope) in &= b.count(x) > 0;
            if (in) return true;
        }
        return false;
    }

    bool all_covered() const {
        for (auto& s : scopes)
            if (!covered(s)) return false;
        return true;
    }

    static bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }

    static int overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
        int n = 0;
        for (auto& x : a) n += b.count(x) > 0;
        return n;
    }

    void emit() {
        TreeDecomposition d;
        d.parent = parent;
        d.bags = bags;
        d.overlap_bound = l_eff;
        d.bag_bound = k_eff;
        if (!cb(d)) stopped = true;
    }

    void search(int min_parent) {
        if (stopped) return;
        if (++work > work_cap) throw CapExceeded("decomposition search: work cap exceeded");
        if (all_covered()) emit();
        if (stopped) return;
        if (bags.size() > elems.size() + 1) return;
        for (int p = min_parent; p < (int)bags.size() && !stopped; ++p) {
            for (auto& b : candidate_bags) {
                if (subset(b, bags[p]) || subset(bags[p], b)) continue;
                // connectivity: previously used elements can only re-enter
                // through the parent bag
                bool ok = true;
                for (auto& x : b)
                    if (used.count(x) && !bags[p].count(x)) { ok = false; break; }
                if (!ok) continue;
                for (size_t v = 0; v < bags.size() && ok; ++v)
                    if (overlap(b, bags[v]) > l_eff) ok = false;
                if (!ok) continue;
                std::vector<std::string> fresh;
                for (auto& x : b)
                    if (!used.count(x)) fresh.push_back(x);
                if (fresh.empty()) continue;  // normal form: new node adds an element
                parent.push_back(p);
                bags.push_back(b);
                for (auto& x : fresh) used.insert(x);
                search(p);
                for (auto& x : fresh) used.erase(x);
                bags.pop_back();
                parent.pop_back();
            }
        }
    }

    void run() {
        for (auto& root : candidate_bags) {
            if (stopped) return;
            parent = {-1};
            bags = {root};
            used = root;
            search(0);
        }
    }
};

}  // namespace

void enumerate_tree_decompositions(const Hypergraph& h, int l, int k,
                                   const std::vector<std::string>& marks,
                                   const std::function<bool(const TreeDecomposition&)>& cb,
                                   size_t element_cap) {
    std::set<std::string> es(h.elements.begin(), h.elements.end());
    if (es.size() > element_cap)
        throw CapExceeded("decomposition search: instance too large");
    if (h.elements.empty()) {
        // degenerate: everything fits the empty decomposition with one bag
        TreeDecomposition d;
        d.parent = {-1};
        d.bags = {std::set<std::string>(marks.begin(), marks.end())};
        d.overlap_bound = l + (int)d.bags[0].size();
        d.bag_bound = k + (int)d.bags[0].size();
        cb(d);
        return;
    }
    DecompSearch s(h, l, k, marks, cb, 4'000'000);
    s.run();
}

std::optional<TreeDecomposition> find_lk_decomposition(const Instance& inst, int l, int k,
                                                       const std::vector<std::string>& marks,
                                                       size_t element_cap) {
    Hypergraph h;
    for (auto& e : inst.domain()) h.elements.push_back(e);
    for (auto& f : inst.facts) {
        std::set<std::string> sc(f.args.begin(), f.args.end());
        h.scopes.emplace_back(sc.begin(), sc.end());
    }
    for (auto& m : marks) {
        bool known = false;
        for (auto& e : h.elements) known |= e == m;
        if (!known) h.elements.push_back(m);
    }
    std::optional<TreeDecomposition> out;
    enumerate_tree_decompositions(
        h, l, k, marks,
        [&](const TreeDecomposition& d) {
            out = d;
            return false;
        },
        element_cap);
    return out;
}

int one_k_decomposition_girth(const Instance& inst, int k, size_t fact_cap) {
    std::vector<Fact> facts(inst.facts.begin(), inst.facts.end());
    if (facts.size() > fact_cap)
        throw CapExceeded("one_k_decomposition_girth: too many facts");
    size_t n = facts.size();
    if (n == 0) return kGirthOmega;
    // enumerate set partitions via restricted growth strings
    std::vector<int> part(n, 0);
    int best = 0;
    bool found_any = false, found_omega = false;
    std::function<void(size_t, int)> rec = [&](size_t i, int maxp) {
        if (found_omega) return;
        if (i == n) {
            int nparts = maxp + 1;
            std::vector<std::set<std::string>> adoms(nparts);
            for (size_t j = 0; j < n; ++j)
                adoms[part[j]].insert(facts[j].args.begin(), facts[j].args.end());
            for (int p = 0; p < nparts; ++p) {
                if ((int)adoms[p].size() > k) return;
                for (int q = p + 1; q < nparts; ++q) {
                    int ov = 0;
                    for (auto& x : adoms[p]) ov += adoms[q].count(x) > 0;
                    if (ov > 1) return;
                }
            }
            // aggregated instance: one fact per part over its sorted adom
            Instance agg;
            for (int p = 0; p < nparts; ++p) {
                std::string rel = "part" + std::to_string(p);
                agg.schema.add(rel, (int)adoms[p].size());
                Fact f{rel, {adoms[p].begin(), adoms[p].end()}};
                agg.facts.insert(f);
            }
            int g = girth(agg);
            found_any = true;
            if (g == kGirthOmega) found_omega = true;
            else best = std::max(best, g);
            return;
        }
        for (int p = 0; p <= maxp + 1; ++p) {
            part[i] = p;
            rec(i + 1, std::max(maxp, p));
        }
    };
    rec(0, -1);
    if (found_omega) return kGirthOmega;
    if (!found_any) return 1;  // no valid decomposition; certainly not omega
    return best;
}

// ------------------------------------------------------------- aggregation

std::string AggregationSchema::relation_for(const ConjunctiveQuery& q) const {
    auto c = canonical_cq(q);
    for (auto& [name, def] : defining)
        if (def == c) return name;
    return "";
}

std::string AggregationSchema::add(const ConjunctiveQuery& q) {
    auto c = canonical_cq(q);
    auto existing = relation_for(c);
    if (!existing.empty()) return existing;
    std::string name = "Rq" + std::to_string(defining.size());
    defining[name] = c;
    agg.add(name, (int)c.answer_vars.size());
    return name;
}

namespace {

// All assignments of the atom variables into inst such that every atom
// becomes a fact; constants map to themselves.
void enumerate_matches_impl(const std::vector<Atom>& atoms, const Instance& inst,
                            std::map<std::string, std::string>& assign, size_t ai,
                            const std::function<bool(const std::map<std::string, std::string>&)>& cb,
                            bool& stop,
                            const std::map<std::string, std::vector<Fact>>& by_rel) {
    if (stop) return;
    if (ai == atoms.size()) {
        if (!cb(assign)) stop = true;
        return;
    }
    const Atom& a = atoms[ai];
    auto it = by_rel.find(a.rel);
    if (it == by_rel.end()) return;
    for (auto& f : it->second) {
        std::vector<std::string> added;
        bool ok = true;
        for (size_t i = 0; i < a.args.size() && ok; ++i) {
            const Term& t = a.args[i];
            if (t.is_const) {
                ok = t.name == f.args[i];
            } else {
                auto jt = assign.find(t.name);
                if (jt != assign.end()) ok = jt->second == f.args[i];
                else {
                    assign[t.name] = f.args[i];
                    added.push_back(t.name);
                }
            }
        }
        if (ok) enumerate_matches_impl(atoms, inst, assign, ai + 1, cb, stop, by_rel);
        for (auto& k : added) assign.erase(k);
        if (stop) return;
    }
}

}  // namespace

void enumerate_matches(const std::vector<Atom>& atoms, const Instance& inst,
                       const std::map<std::string, std::string>& fixed,
                       const std::function<bool(const std::map<std::string, std::string>&)>& cb) {
    std::map<std::string, std::vector<Fact>> by_rel;
    for (auto& f : inst.facts) by_rel[f.rel].push_back(f);
    std::map<std::string, std::string> assign = fixed;
    bool stop = false;
    enumerate_matches_impl(atoms, inst, assign, 0, cb, stop, by_rel);
}

Instance to_aggregation_instance(const Instance& base, const AggregationSchema& agg) {
    Instance out;
    out.schema = agg.agg;
    for (auto& [name, q] : agg.defining) {
        enumerate_matches(q.atoms, base, {}, [&](const std::map<std::string, std::string>& m) {
            Fact f{name, {}};
            for (auto& v : q.answer_vars) f.args.push_back(m.at(v));
            out.facts.insert(f);
            return true;
        });
    }
    return out;
}

Instance from_aggregation_instance(const Instance& aggInst, const AggregationSchema& agg) {
    Instance out;
    out.schema = agg.base;
    for (auto& f : aggInst.facts) {
        auto it = agg.defining.find(f.rel);
        if (it == agg.defining.end())
            throw ValidationError("unknown aggregation relation " + f.rel);
        const ConjunctiveQuery& q = it->second;
        std::map<std::string, std::string> m;
        for (size_t i = 0; i < q.answer_vars.size(); ++i) m[q.answer_vars[i]] = f.args[i];
        for (auto& a : q.atoms) {
            Fact g{a.rel, {}};
            for (auto& t : a.args) g.args.push_back(t.is_const ? t.name : m.at(t.name));
            out.facts.insert(g);
        }
    }
    return out;
}

// ---------------------------------------------------- power / square / lift

namespace {
std::string join_names(const std::vector<std::string>& parts, const std::string& sep) {
    std::string s;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) s += sep;
        s += parts[i];
    }
    return s;
}
}  // namespace

Instance power_structure(const Instance& t, size_t domain_cap) {
    auto dom_set = t.domain();
    std::vector<std::string> dom(dom_set.begin(), dom_set.end());
    if (dom.size() > domain_cap) throw CapExceeded("power_structure: domain exceeds cap");
    size_t n = dom.size();
    std::vector<std::set<std::string>> subsets;
    std::vector<std::string> names;
    for (uint64_t mask = 1; mask < (1ull << n); ++mask) {
        std::set<std::string> s;
        std::vector<std::string> parts;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1ull << i)) { s.insert(dom[i]); parts.push_back(dom[i]); }
        subsets.push_back(s);
        names.push_back(join_names(parts, "_"));
    }
    std::map<std::string, std::vector<Fact>> by_rel;
    for (auto& f : t.facts) by_rel[f.rel].push_back(f);
    Instance out;
    out.schema = t.schema;
    for (auto& nm : names) out.extra_domain.insert(nm);
    for (auto& rel : t.schema.relations) {
        int ar = rel.arity;
        if (ar == 0) {
            if (by_rel.count(rel.name)) out.facts.insert(Fact{rel.name, {}});
            continue;
        }
        std::vector<size_t> idx(ar, 0);
        // iterate tuples of subsets
        std::function<void(int)> rec = [&](int pos) {
            if (pos == ar) {
                // check: for each i, each a in S_i, exists tuple through a
                for (int i = 0; i < ar; ++i) {
                    for (auto& a : subsets[idx[i]]) {
                        bool has = false;
                        for (auto& f : by_rel[rel.name]) {
                            if (f.args[i] != a) continue;
                            bool inside = true;
                            for (int j = 0; j < ar && inside; ++j)
                                inside = subsets[idx[j]].count(f.args[j]) > 0;
                            if (inside) { has = true; break; }
                        }
                        if (!has) return;
                    }
                }
                Fact f{rel.name, {}};
                for (int i = 0; i < ar; ++i) f.args.push_back(names[idx[i]]);
                out.facts.insert(f);
                return;
            }
            for (size_t s = 0; s < subsets.size(); ++s) {
                idx[pos] = s;
                rec(pos + 1);
            }
        };
        rec(0);
    }
    return out;
}

Instance square(const Instance& t, size_t domain_cap) {
    auto dom_set = t.domain();
    std::vector<std::string> dom(dom_set.begin(), dom_set.end());
    if (dom.size() * dom.size() > domain_cap * domain_cap)
        throw CapExceeded("square: domain exceeds cap");
    auto pname = [](const std::string& a, const std::string& b) { return a + "__" + b; };
    Instance out;
    out.schema = t.schema;
    for (auto& a : dom)
        for (auto& b : dom) out.extra_domain.insert(pname(a, b));
    std::map<std::string, std::vector<Fact>> by_rel;
    for (auto& f : t.facts) by_rel[f.rel].push_back(f);
    for (auto& rel : t.schema.relations) {
        for (auto& f1 : by_rel[rel.name])
            for (auto& f2 : by_rel[rel.name]) {
                Fact f{rel.name, {}};
                for (int i = 0; i < rel.arity; ++i)
                    f.args.push_back(pname(f1.args[i], f2.args[i]));
                out.facts.insert(f);
            }
    }
    return out;
}

namespace detail {
int girth_with_witness(const Instance& inst, std::vector<Fact>* cycle_facts);
}

ExplosionResult explode_girth(const Instance& inst, int g,
                              const std::vector<Instance>& targets, uint64_t seed,
                              int attempt_budget) {
    if (g < 0) throw ValidationError("explode_girth: negative girth bound");
    std::vector<bool> maps(targets.size());
    for (size_t i = 0; i < targets.size(); ++i) maps[i] = maps_to(inst, targets[i]);

    if (girth_exceeds(inst, g)) {
        ExplosionResult r;
        r.instance = inst;
        for (auto& c : inst.domain()) r.hom_to_input[c] = c;
        r.attempts = 0;
        return r;
    }

    std::mt19937_64 rng(seed);
    std::vector<Fact> base_facts(inst.facts.begin(), inst.facts.end());
    for (int attempt = 1; attempt <= attempt_budget; ++attempt) {
        int m = 2 + attempt / 8;              // copies per constant, grows slowly
        int copies = 2 * m;                   // lifted facts per base fact
        Instance lift;
        lift.schema = inst.schema;
        std::map<std::string, std::string> proj;
        auto lifted = [&](const std::string& c, int i) {
            std::string nm = c + "_" + std::to_string(i);
            proj[nm] = c;
            return nm;
        };
        for (auto& f : base_facts)
            for (int r = 0; r < copies; ++r) {
                Fact lf{f.rel, {}};
                for (auto& a : f.args)
                    lf.args.push_back(lifted(a, (int)(rng() % m)));
                lift.facts.insert(lf);
            }
        // break remaining short cycles by deleting one fact per cycle
        bool bad = false;
        for (int round = 0; round < 10000; ++round) {
            std::vector<Fact> cyc;
            int gi = detail::girth_with_witness(lift, &cyc);
            if (gi == kGirthOmega || gi > g) break;
            if (cyc.empty()) { bad = true; break; }
            lift.facts.erase(cyc[rng() % cyc.size()]);
        }
        if (bad || !girth_exceeds(lift, g)) continue;
        // verify the three contract conditions
        bool ok = true;
        for (auto& [k, v] : proj)
            (void)k, (void)v;  // projection is a hom by construction
        for (size_t i = 0; i < targets.size() && ok; ++i)
            ok = maps_to(lift, targets[i]) == maps[i];
        if (!ok) continue;
        ExplosionResult r;
        r.instance = lift;
        // restrict projection to surviving constants
        for (auto& c : lift.adom()) r.hom_to_input[c] = proj.at(c);
        r.attempts = attempt;
        return r;
    }
    throw CapExceeded("explode_girth: attempt budget exhausted");
}

}  // namespace mddlog
