#include "mddlog/core.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

namespace mddlog {

// ---------------------------------------------------------------- Schema

void Schema::add(const std::string& name, int arity) {
    if (arity < 0) throw ValidationError("negative arity for " + name);
    for (auto& r : relations) {
        if (r.name == name) {
            if (r.arity != arity)
                throw ValidationError("relation " + name + " redeclared with different arity");
            return;
        }
    }
    relations.push_back({name, arity});
    std::sort(relations.begin(), relations.end());
}

bool Schema::has(const std::string& name) const { return arity_of(name) >= 0; }

int Schema::arity_of(const std::string& name) const {
    for (auto& r : relations)
        if (r.name == name) return r.arity;
    return -1;
}

void Schema::validate() const {
    for (size_t i = 0; i + 1 < relations.size(); ++i)
        if (relations[i].name == relations[i + 1].name)
            throw ValidationError("duplicate relation " + relations[i].name);
    for (auto& r : relations) {
        if (r.arity < 0) throw ValidationError("negative arity for " + r.name);
        if (r.name == "eq" && r.arity != 2) throw ValidationError("eq must have arity 2");
        if (r.arity > 16) throw ValidationError("arity > 16 unsupported: " + r.name);
    }
}

int Schema::max_arity() const {
    int m = 0;
    for (auto& r : relations) m = std::max(m, r.arity);
    return m;
}

Schema merge(const Schema& a, const Schema& b) {
    Schema s = a;
    for (auto& r : b.relations) s.add(r.name, r.arity);
    return s;
}

// ---------------------------------------------------------------- Instance

std::set<std::string> Instance::adom() const {
    std::set<std::string> d;
    for (auto& f : facts) d.insert(f.args.begin(), f.args.end());
    return d;
}

std::set<std::string> Instance::domain() const {
    auto d = adom();
    d.insert(extra_domain.begin(), extra_domain.end());
    return d;
}

void Instance::validate() const {
    schema.validate();
    for (auto& f : facts) {
        int ar = schema.arity_of(f.rel);
        if (ar < 0) throw ValidationError("fact over unknown relation " + f.rel);
        if ((int)f.args.size() != ar)
            throw ValidationError("fact arity mismatch for " + f.rel);
    }
}

Instance restrict_to(const Instance& inst, const std::set<std::string>& keep) {
    Instance out;
    out.schema = inst.schema;
    for (auto& f : inst.facts) {
        bool ok = true;
        for (auto& a : f.args)
            if (!keep.count(a)) { ok = false; break; }
        if (ok) out.facts.insert(f);
    }
    for (auto& c : inst.extra_domain)
        if (keep.count(c)) out.extra_domain.insert(c);
    return out;
}

Instance rename_constants(const Instance& inst, const std::map<std::string, std::string>& m) {
    Instance out;
    out.schema = inst.schema;
    auto ren = [&](const std::string& c) {
        auto it = m.find(c);
        return it == m.end() ? c : it->second;
    };
    for (auto& f : inst.facts) {
        Fact g{f.rel, {}};
        for (auto& a : f.args) g.args.push_back(ren(a));
        out.facts.insert(std::move(g));
    }
    for (auto& c : inst.extra_domain) out.extra_domain.insert(ren(c));
    return out;
}

namespace {

std::string canon_name(size_t i) { return "c" + std::to_string(i); }

// Minimize the renamed fact set over all bijections dom -> c0..c{n-1}.
// Exact up to 8 elements, greedy (first-occurrence order) beyond.
Instance minimize_over_labelings(const Instance& inst) {
    auto dom_set = inst.domain();
    std::vector<std::string> dom(dom_set.begin(), dom_set.end());
    size_t n = dom.size();
    auto apply = [&](const std::vector<size_t>& perm) {
        std::map<std::string, std::string> m;
        for (size_t i = 0; i < n; ++i) m[dom[i]] = canon_name(perm[i]);
        return rename_constants(inst, m);
    };
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    if (n > 8) {
        // greedy: first occurrence in sorted fact list
        std::map<std::string, std::string> m;
        size_t next = 0;
        for (auto& f : inst.facts)
            for (auto& a : f.args)
                if (!m.count(a)) m[a] = canon_name(next++);
        for (auto& c : inst.extra_domain)
            if (!m.count(c)) m[c] = canon_name(next++);
        return rename_constants(inst, m);
    }
    std::optional<Instance> best;
    do {
        Instance cand = apply(perm);
        if (!best || cand < *best) best = cand;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best ? *best : inst;
}

}  // namespace

Instance canonical_instance(const Instance& inst) { return minimize_over_labelings(inst); }

// ---------------------------------------------------------------- Rule / Program

std::set<std::string> Rule::variables() const {
    std::set<std::string> v;
    for (auto* part : {&head, &body})
        for (auto& a : *part)
            for (auto& t : a.args)
                if (!t.is_const) v.insert(t.name);
    return v;
}

int Rule::variable_occurrences() const {
    int n = 0;
    for (auto& a : body)
        for (auto& t : a.args)
            if (!t.is_const) ++n;
    return n;
}

bool Program::is_monadic() const {
    for (auto& r : idb.relations)
        if (r.name != goal_name && r.arity > 1) return false;
    return true;
}

bool Program::is_datalog() const {
    for (auto& r : rules)
        if (r.head.size() != 1) return false;
    return true;
}

int Program::diameter() const {
    int d = 0;
    for (auto& r : rules) d = std::max(d, (int)r.variables().size());
    return d;
}

int Program::rule_size() const {
    int s = 0;
    for (auto& r : rules) s = std::max(s, r.variable_occurrences());
    return s;
}

int Program::width() const {
    int w = 0;
    for (auto& r : idb.relations)
        if (r.name != goal_name) w = std::max(w, r.arity);
    return w;
}

void Program::validate(bool strict_goal) const {
    edb.validate();
    idb.validate();
    for (auto& r : edb.relations)
        if (idb.has(r.name))
            throw ValidationError("relation in both EDB and IDB: " + r.name);
    if (idb.has(goal_name) && idb.arity_of(goal_name) != goal_arity)
        throw ValidationError("goal arity mismatch");
    std::set<std::string> consts(constants.begin(), constants.end());
    auto check_atom = [&](const Atom& a, bool in_head) {
        int ar = in_head ? idb.arity_of(a.rel)
                         : (edb.has(a.rel) ? edb.arity_of(a.rel) : idb.arity_of(a.rel));
        if (a.rel == "true" && !in_head) ar = 1;  // sugar
        if (ar < 0)
            throw ValidationError("unknown relation " + a.rel);
        if ((int)a.args.size() != ar)
            throw ValidationError("arity mismatch for " + a.rel);
        for (auto& t : a.args)
            if (t.is_const && !consts.count(t.name))
                throw ValidationError("undeclared constant " + t.name);
    };
    for (auto& r : rules) {
        if (r.body.empty()) throw ValidationError("rule with empty body");
        std::set<std::string> bodyvars;
        for (auto& a : r.body) {
            check_atom(a, false);
            if (a.rel == goal_name) throw ValidationError("goal occurs in a rule body");
            for (auto& t : a.args)
                if (!t.is_const) bodyvars.insert(t.name);
        }
        for (auto& a : r.head) {
            check_atom(a, true);
            if (!idb.has(a.rel)) throw ValidationError("head relation not IDB: " + a.rel);
            for (auto& t : a.args)
                if (!t.is_const && !bodyvars.count(t.name))
                    throw ValidationError("head variable not in body: " + t.name);
        }
        if (strict_goal) {
            bool has_goal = false;
            for (auto& a : r.head) has_goal |= a.rel == goal_name;
            if (has_goal && r.head.size() != 1)
                throw ValidationError("goal occurs in a disjunctive head");
        }
        if (parameter_count > 0) {
            // all IDB atoms agree on the last parameter_count positions
            std::optional<std::vector<Term>> tail;
            for (auto* part : {&r.head, &r.body})
                for (auto& a : *part) {
                    if (!idb.has(a.rel)) continue;
                    if ((int)a.args.size() < parameter_count)
                        throw ValidationError("IDB arity below parameter count: " + a.rel);
                    std::vector<Term> t(a.args.end() - parameter_count, a.args.end());
                    if (!tail) tail = t;
                    else if (*tail != t)
                        throw ValidationError("IDB atoms disagree on parameter positions");
                }
        }
    }
}

Program expand_true_sugar(const Program& p) {
    Program out = p;
    out.rules.clear();
    std::vector<Rule> work(p.rules.begin(), p.rules.end());
    int fresh = 0;
    while (!work.empty()) {
        Rule r = work.back();
        work.pop_back();
        int pos = -1;
        for (size_t i = 0; i < r.body.size(); ++i)
            if (r.body[i].rel == "true") { pos = (int)i; break; }
        if (pos < 0) {
            out.rules.push_back(r);
            continue;
        }
        Term x = r.body[pos].args.at(0);
        for (auto& rel : p.edb.relations) {
            if (rel.arity == 0) continue;
            for (int at = 0; at < rel.arity; ++at) {
                Rule nr = r;
                Atom a{rel.name, {}};
                for (int j = 0; j < rel.arity; ++j) {
                    if (j == at) a.args.push_back(x);
                    else a.args.push_back(var("_t" + std::to_string(fresh++)));
                }
                nr.body[pos] = a;
                work.push_back(nr);
            }
        }
    }
    // dedup, stable canonical order
    std::set<Rule> seen;
    std::vector<Rule> dedup;
    for (auto& r : out.rules) {
        Rule c = canonical_rule(r);
        if (seen.insert(c).second) dedup.push_back(c);
    }
    out.rules = dedup;
    return out;
}

// ---------------------------------------------------------------- queries

std::set<std::string> ConjunctiveQuery::variables() const {
    std::set<std::string> v(answer_vars.begin(), answer_vars.end());
    for (auto& a : atoms)
        for (auto& t : a.args)
            if (!t.is_const) v.insert(t.name);
    return v;
}

Instance ConjunctiveQuery::canonical_db(const Schema& schema) const {
    Instance inst;
    inst.schema = schema;
    for (auto& a : atoms) {
        Fact f{a.rel, {}};
        for (auto& t : a.args) f.args.push_back(t.name);
        inst.facts.insert(std::move(f));
    }
    for (auto& v : answer_vars) inst.extra_domain.insert(v);
    return inst;
}

void UnionQuery::validate() const {
    if (disjuncts.empty()) throw ValidationError("empty UCQ");
    for (auto& d : disjuncts)
        if (d.answer_vars.size() != disjuncts[0].answer_vars.size())
            throw ValidationError("UCQ disjuncts of unequal arity");
}

namespace {

std::string canon_var(size_t i) { return "x" + std::to_string(i); }

Atom rename_atom(const Atom& a, const std::map<std::string, std::string>& m) {
    Atom out{a.rel, {}};
    for (auto& t : a.args) {
        if (t.is_const) out.args.push_back(t);
        else {
            auto it = m.find(t.name);
            out.args.push_back(var(it == m.end() ? t.name : it->second));
        }
    }
    return out;
}

// Key used to pick the minimal labeling of a rule or CQ.
struct CanonKey {
    std::vector<Atom> sorted_atoms;
    std::vector<Atom> head;
    std::vector<std::string> answers;
    auto operator<=>(const CanonKey&) const = default;
};

template <typename MakeKey>
std::map<std::string, std::string> minimize_labeling(const std::set<std::string>& vars,
                                                     MakeKey make_key) {
    std::vector<std::string> vs(vars.begin(), vars.end());
    size_t n = vs.size();
    std::map<std::string, std::string> best_map;
    if (n > 9) {
        // too many variables for exact search: greedy by current order
        for (size_t i = 0; i < n; ++i) best_map[vs[i]] = canon_var(i);
        return best_map;
    }
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<CanonKey> best;
    do {
        std::map<std::string, std::string> m;
        for (size_t i = 0; i < n; ++i) m[vs[i]] = canon_var(perm[i]);
        CanonKey k = make_key(m);
        if (!best || k < *best) { best = k; best_map = m; }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best_map;
}

}  // namespace

ConjunctiveQuery rename_vars(const ConjunctiveQuery& q, const std::map<std::string, std::string>& m) {
    ConjunctiveQuery out;
    for (auto& v : q.answer_vars) {
        auto it = m.find(v);
        out.answer_vars.push_back(it == m.end() ? v : it->second);
    }
    for (auto& a : q.atoms) out.atoms.push_back(rename_atom(a, m));
    return out;
}

Rule rename_vars(const Rule& r, const std::map<std::string, std::string>& m) {
    Rule out;
    for (auto& a : r.head) out.head.push_back(rename_atom(a, m));
    for (auto& a : r.body) out.body.push_back(rename_atom(a, m));
    return out;
}

ConjunctiveQuery canonical_cq(const ConjunctiveQuery& q) {
    auto m = minimize_labeling(q.variables(), [&](const std::map<std::string, std::string>& m) {
        ConjunctiveQuery r = rename_vars(q, m);
        std::sort(r.atoms.begin(), r.atoms.end());
        return CanonKey{r.atoms, {}, r.answer_vars};
    });
    ConjunctiveQuery out = rename_vars(q, m);
    std::sort(out.atoms.begin(), out.atoms.end());
    out.atoms.erase(std::unique(out.atoms.begin(), out.atoms.end()), out.atoms.end());
    return out;
}

Rule canonical_rule(const Rule& r) {
    auto m = minimize_labeling(r.variables(), [&](const std::map<std::string, std::string>& m) {
        Rule c = rename_vars(r, m);
        std::sort(c.body.begin(), c.body.end());
        std::sort(c.head.begin(), c.head.end());
        return CanonKey{c.body, c.head, {}};
    });
    Rule out = rename_vars(r, m);
    std::sort(out.body.begin(), out.body.end());
    out.body.erase(std::unique(out.body.begin(), out.body.end()), out.body.end());
    std::sort(out.head.begin(), out.head.end());
    out.head.erase(std::unique(out.head.begin(), out.head.end()), out.head.end());
    return out;
}

UnionQuery canonical_ucq(const UnionQuery& q) {
    UnionQuery out;
    std::set<ConjunctiveQuery> seen;
    for (auto& d : q.disjuncts) {
        auto c = canonical_cq(d);
        if (seen.insert(c).second) out.disjuncts.push_back(c);
    }
    std::sort(out.disjuncts.begin(), out.disjuncts.end());
    return out;
}

// ---------------------------------------------------------------- MMSNP

int MmsnpSentence::diameter() const {
    int d = 0;
    for (auto& imp : implications) {
        std::set<std::string> v;
        for (auto* part : {&imp.head, &imp.body})
            for (auto& a : *part)
                for (auto& t : a.args) v.insert(t.name);
        d = std::max(d, (int)v.size());
    }
    return d;
}

void MmsnpSentence::validate() const {
    schema.validate();
    std::set<std::string> so(so_vars.begin(), so_vars.end());
    for (auto& imp : implications) {
        for (auto& a : imp.head) {
            if (!so.count(a.rel)) throw ValidationError("head atom not an SO variable: " + a.rel);
            if (a.args.size() != 1) throw ValidationError("SO variables are monadic");
        }
        for (auto& a : imp.body) {
            if (so.count(a.rel)) {
                if (a.args.size() != 1) throw ValidationError("SO variables are monadic");
            } else if (!schema.has(a.rel)) {
                throw ValidationError("unknown relation " + a.rel);
            }
        }
    }
}

Program mmsnp_to_mddlog(const MmsnpSentence& s) {
    s.validate();
    Program p;
    p.edb = s.schema;
    for (auto& x : s.so_vars) p.idb.add(x, 1);
    p.idb.add("goal", 0);
    p.goal_arity = 0;
    int fresh = 0;
    for (auto& imp : s.implications) {
        Rule r;
        r.head = imp.head;
        r.body = imp.body;
        // head variables that do not occur in the body get a true() guard
        std::set<std::string> bodyvars;
        for (auto& a : r.body)
            for (auto& t : a.args) bodyvars.insert(t.name);
        for (auto& a : r.head)
            for (auto& t : a.args)
                if (!bodyvars.count(t.name)) {
                    r.body.push_back({"true", {t}});
                    bodyvars.insert(t.name);
                }
        if (r.body.empty()) {
            // variable-free implication: guard with a throwaway true atom
            r.body.push_back({"true", {var("_g" + std::to_string(fresh++))}});
        }
        p.rules.push_back(r);
    }
    return p;
}

MmsnpSentence mddlog_to_mmsnp(const Program& p0) {
    if (!p0.is_boolean()) throw ValidationError("mddlog_to_mmsnp requires a Boolean program");
    if (!p0.is_monadic()) throw ValidationError("mddlog_to_mmsnp requires a monadic program");
    Program p = p0;
    MmsnpSentence s;
    s.schema = p.edb;
    std::set<std::string> nullary;
    for (auto& r : p.idb.relations) {
        if (r.name == p.goal_name) continue;
        s.so_vars.push_back(r.name + (r.arity == 0 ? "_hat" : ""));
        if (r.arity == 0) nullary.insert(r.name);
    }
    int fresh = 0;
    auto lift = [&](const Atom& a, std::vector<Atom>& extra_true) -> Atom {
        if (nullary.count(a.rel)) {
            Term t = var("_u" + std::to_string(fresh++));
            extra_true.push_back({"true", {t}});
            return Atom{a.rel + "_hat", {t}};
        }
        return a;
    };
    for (auto& r : p.rules) {
        MmsnpImplication imp;
        std::vector<Atom> guards;
        bool goal_head = false;
        for (auto& a : r.head) {
            if (a.rel == p.goal_name) { goal_head = true; continue; }
            imp.head.push_back(lift(a, guards));
        }
        for (auto& a : r.body) imp.body.push_back(lift(a, guards));
        for (auto& g : guards) imp.body.push_back(g);
        if (goal_head) {
            // goal() <- body becomes the forbidden pattern false <- body
            MmsnpImplication forbid;
            forbid.body = imp.body;
            // remaining head disjuncts (if any) stay: goal v H <- B means
            // H <- B for assignments avoiding goal
            forbid.head = imp.head;
            s.implications.push_back(forbid);
        } else {
            s.implications.push_back(imp);
        }
    }
    // all-or-nothing constraint for lifted nullary IDBs
    for (auto& q : nullary) {
        MmsnpImplication imp;
        imp.head.push_back({q + "_hat", {var("x")}});
        imp.body.push_back({q + "_hat", {var("y")}});
        imp.body.push_back({"true", {var("x")}});
        s.implications.push_back(imp);
    }
    return s;
}

// ---------------------------------------------------------------- lexer

namespace {

struct Token {
    enum Kind { Ident, Punct, End } kind = End;
    std::string text;
    int line = 1, col = 1;
};

struct Lexer {
    std::string src;
    size_t pos = 0;
    int line = 1, col = 1;
    Token cur;

    explicit Lexer(std::string s) : src(std::move(s)) { advance(); }

    void bump(char c) {
        if (c == '\n') { line++; col = 1; }
        else col++;
    }

    void advance() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '%' || (c == '/' && pos + 1 < src.size() && src[pos + 1] == '/')) {
                while (pos < src.size() && src[pos] != '\n') { bump(src[pos]); pos++; }
            } else if (isspace((unsigned char)c)) {
                bump(c); pos++;
            } else break;
        }
        cur = {};
        cur.line = line;
        cur.col = col;
        if (pos >= src.size()) { cur.kind = Token::End; return; }
        char c = src[pos];
        if (isalnum((unsigned char)c) || c == '_' ) {
            std::string id;
            while (pos < src.size() &&
                   (isalnum((unsigned char)src[pos]) || src[pos] == '_' || src[pos] == '\'')) {
                id += src[pos]; bump(src[pos]); pos++;
            }
            cur.kind = Token::Ident;
            cur.text = id;
            return;
        }
        cur.kind = Token::Punct;
        if (c == ':' && pos + 1 < src.size() && src[pos + 1] == '-') {
            cur.text = ":-"; bump(':'); bump('-'); pos += 2; return;
        }
        if (c == '<' && pos + 1 < src.size() && src[pos + 1] == '-') {
            cur.text = "<-"; bump('<'); bump('-'); pos += 2; return;
        }
        if (c == '[' && pos + 1 < src.size() && src[pos + 1] == '=') {
            cur.text = "[="; bump('['); bump('='); pos += 2; return;
        }
        cur.text = std::string(1, c);
        bump(c); pos++;
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, cur.line, cur.col); }

    bool at_ident(const std::string& s) const { return cur.kind == Token::Ident && cur.text == s; }
    bool at_punct(const std::string& s) const { return cur.kind == Token::Punct && cur.text == s; }

    std::string expect_ident() {
        if (cur.kind != Token::Ident) fail("expected identifier, got '" + cur.text + "'");
        std::string s = cur.text;
        advance();
        return s;
    }
    void expect_punct(const std::string& s) {
        if (!at_punct(s)) fail("expected '" + s + "', got '" + cur.text + "'");
        advance();
    }
};

// Parses R(t1,...,tn) with an optional '|' separating parameter positions;
// '|' is cosmetic, positions count normally.
Atom parse_atom(Lexer& lx, const std::set<std::string>& consts) {
    Atom a;
    if (lx.at_punct("=")) {  // equality atom in CQs: =(x,y)
        a.rel = "=";
        lx.advance();
    } else {
        a.rel = lx.expect_ident();
    }
    lx.expect_punct("(");
    if (!lx.at_punct(")")) {
        for (;;) {
            std::string t = lx.expect_ident();
            a.args.push_back(consts.count(t) ? cst(t) : var(t));
            if (lx.at_punct(",") || lx.at_punct("|")) { lx.advance(); continue; }
            break;
        }
    }
    lx.expect_punct(")");
    return a;
}

std::vector<Atom> parse_body(Lexer& lx, const std::set<std::string>& consts) {
    std::vector<Atom> atoms;
    for (;;) {
        atoms.push_back(parse_atom(lx, consts));
        if (lx.at_punct(",")) { lx.advance(); continue; }
        break;
    }
    return atoms;
}

void parse_decl_list(Lexer& lx, Schema& s) {
    for (;;) {
        std::string name = lx.expect_ident();
        lx.expect_punct("/");
        std::string ar = lx.expect_ident();
        s.add(name, std::stoi(ar));
        if (lx.at_punct(",")) { lx.advance(); continue; }
        break;
    }
    lx.expect_punct(".");
}

}  // namespace

// ---------------------------------------------------------------- parse_program

Program parse_program(const std::string& text) {
    Lexer lx(text);
    Program p;
    std::set<std::string> consts;
    bool goal_declared = false;
    while (lx.cur.kind != Token::End) {
        if (lx.at_ident("edb")) {
            lx.advance();
            parse_decl_list(lx, p.edb);
            continue;
        }
        if (lx.at_ident("idb")) {
            lx.advance();
            parse_decl_list(lx, p.idb);
            continue;
        }
        if (lx.at_ident("goal")) {
            // either a declaration goal/0. or a goal rule goal(...) :- ...
            Lexer save = lx;
            lx.advance();
            if (lx.at_punct("/")) {
                lx.advance();
                p.goal_arity = std::stoi(lx.expect_ident());
                p.idb.add(p.goal_name, p.goal_arity);
                goal_declared = true;
                lx.expect_punct(".");
                continue;
            }
            lx = save;  // fall through to rule parsing
        }
        if (lx.at_ident("const")) {
            lx.advance();
            for (;;) {
                std::string c = lx.expect_ident();
                consts.insert(c);
                p.constants.push_back(c);
                if (lx.at_punct(",")) { lx.advance(); continue; }
                break;
            }
            lx.expect_punct(".");
            continue;
        }
        if (lx.at_ident("params")) {
            lx.advance();
            p.parameter_count = std::stoi(lx.expect_ident());
            lx.expect_punct(".");
            continue;
        }
        // a rule: [Head (v Head)*] :- Body .
        Rule r;
        if (!lx.at_punct(":-")) {
            if (lx.at_ident("false")) {
                lx.advance();  // empty head
            } else {
                for (;;) {
                    r.head.push_back(parse_atom(lx, consts));
                    if (lx.at_ident("v")) { lx.advance(); continue; }
                    break;
                }
            }
        }
        lx.expect_punct(":-");
        r.body = parse_body(lx, consts);
        lx.expect_punct(".");
        p.rules.push_back(r);
    }
    // infer IDB membership for head relations that were not declared
    for (auto& r : p.rules)
        for (auto& a : r.head)
            if (!p.idb.has(a.rel)) p.idb.add(a.rel, (int)a.args.size());
    if (!goal_declared && !p.idb.has(p.goal_name)) {
        // derive goal arity from goal rules if present
        for (auto& r : p.rules)
            for (auto& a : r.head)
                if (a.rel == p.goal_name) p.goal_arity = (int)a.args.size();
        p.idb.add(p.goal_name, p.goal_arity);
    }
    if (p.idb.has(p.goal_name)) p.goal_arity = p.idb.arity_of(p.goal_name);
    // infer EDB relations from body atoms that are not IDB and not sugar
    for (auto& r : p.rules)
        for (auto& a : r.body)
            if (!p.idb.has(a.rel) && !p.edb.has(a.rel) && a.rel != "true")
                p.edb.add(a.rel, (int)a.args.size());
    p.validate();
    return p;
}

Instance parse_instance(const std::string& text) {
    Lexer lx(text);
    Instance inst;
    while (lx.cur.kind != Token::End) {
        if (lx.at_ident("edb") || lx.at_ident("schema")) {
            lx.advance();
            parse_decl_list(lx, inst.schema);
            continue;
        }
        if (lx.at_ident("domain")) {
            lx.advance();
            for (;;) {
                inst.extra_domain.insert(lx.expect_ident());
                if (lx.at_punct(",")) { lx.advance(); continue; }
                break;
            }
            lx.expect_punct(".");
            continue;
        }
        Atom a = parse_atom(lx, {});
        lx.expect_punct(".");
        Fact f{a.rel, {}};
        for (auto& t : a.args) f.args.push_back(t.name);
        if (!inst.schema.has(f.rel)) inst.schema.add(f.rel, (int)f.args.size());
        inst.facts.insert(std::move(f));
    }
    inst.validate();
    return inst;
}

UnionQuery parse_ucq(const std::string& text) {
    Lexer lx(text);
    UnionQuery q;
    while (lx.cur.kind != Token::End) {
        if (lx.at_ident("or")) { lx.advance(); continue; }
        Atom head = parse_atom(lx, {});
        lx.expect_punct(":-");
        ConjunctiveQuery cq;
        for (auto& t : head.args) cq.answer_vars.push_back(t.name);
        if (!lx.at_punct(".")) cq.atoms = parse_body(lx, {});
        lx.expect_punct(".");
        // resolve equality atoms (rel "=") by unification
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < cq.atoms.size(); ++i) {
                if (cq.atoms[i].rel != "=") continue;
                auto a = cq.atoms[i].args.at(0).name, b = cq.atoms[i].args.at(1).name;
                cq.atoms.erase(cq.atoms.begin() + i);
                if (a != b) cq = rename_vars(cq, {{b, a}});
                changed = true;
                break;
            }
        }
        q.disjuncts.push_back(cq);
    }
    q.validate();
    return q;
}

MmsnpSentence parse_mmsnp(const std::string& text) {
    Lexer lx(text);
    MmsnpSentence s;
    if (lx.at_ident("mmsnp")) lx.advance();
    lx.expect_punct("{");
    if (lx.at_ident("exists")) {
        lx.advance();
        for (;;) {
            s.so_vars.push_back(lx.expect_ident());
            if (lx.at_punct(",")) { lx.advance(); continue; }
            break;
        }
        lx.expect_punct(".");
    }
    if (lx.at_ident("forall")) {
        lx.advance();
        for (;;) {
            s.fo_vars.push_back(lx.expect_ident());
            if (lx.at_punct(",")) { lx.advance(); continue; }
            break;
        }
        lx.expect_punct(".");
    }
    std::set<std::string> so(s.so_vars.begin(), s.so_vars.end());
    while (!lx.at_punct("}")) {
        MmsnpImplication imp;
        if (lx.at_ident("false")) lx.advance();
        else {
            for (;;) {
                imp.head.push_back(parse_atom(lx, {}));
                if (lx.at_ident("v")) { lx.advance(); continue; }
                break;
            }
        }
        lx.expect_punct("<-");
        imp.body = parse_body(lx, {});
        if (lx.at_punct(".") || lx.at_punct(";")) lx.advance();
        s.implications.push_back(imp);
    }
    lx.expect_punct("}");
    for (auto& imp : s.implications)
        for (auto& a : imp.body)
            if (!so.count(a.rel) && !s.schema.has(a.rel))
                s.schema.add(a.rel, (int)a.args.size());
    s.validate();
    return s;
}

// ---------------------------------------------------------------- rendering

std::string render(const Atom& a) {
    std::string s = a.rel + "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) s += ",";
        s += a.args[i].name;
    }
    return s + ")";
}

std::string render(const Fact& f) {
    std::string s = f.rel + "(";
    for (size_t i = 0; i < f.args.size(); ++i) {
        if (i) s += ",";
        s += f.args[i];
    }
    return s + ")";
}

std::string render(const Rule& r) {
    std::string s;
    if (r.head.empty()) s = "false";
    for (size_t i = 0; i < r.head.size(); ++i) {
        if (i) s += " v ";
        s += render(r.head[i]);
    }
    s += " :- ";
    for (size_t i = 0; i < r.body.size(); ++i) {
        if (i) s += ", ";
        s += render(r.body[i]);
    }
    return s + ".";
}

namespace {
std::string render_decls(const std::string& kw, const Schema& s,
                         const std::string& skip = "") {
    std::string out;
    bool any = false;
    for (auto& r : s.relations) {
        if (r.name == skip) continue;
        out += any ? ", " : kw + " ";
        out += r.name + "/" + std::to_string(r.arity);
        any = true;
    }
    return any ? out + ".\n" : "";
}
}  // namespace

std::string render(const Program& p) {
    std::string s;
    s += render_decls("edb", p.edb);
    s += render_decls("idb", p.idb, p.goal_name);
    s += "goal/" + std::to_string(p.goal_arity) + ".\n";
    if (!p.constants.empty()) {
        s += "const ";
        for (size_t i = 0; i < p.constants.size(); ++i) {
            if (i) s += ",";
            s += p.constants[i];
        }
        s += ".\n";
    }
    if (p.parameter_count > 0)
        s += "params " + std::to_string(p.parameter_count) + ".\n";
    for (auto& r : p.rules) s += render(r) + "\n";
    return s;
}

std::string render(const Instance& inst) {
    std::string s = render_decls("edb", inst.schema);
    auto extra = inst.extra_domain;
    for (auto& a : inst.adom()) extra.erase(a);
    if (!extra.empty()) {
        s += "domain ";
        bool first = true;
        for (auto& c : extra) {
            if (!first) s += ",";
            s += c;
            first = false;
        }
        s += ".\n";
    }
    for (auto& f : inst.facts) s += render(f) + ".\n";
    return s;
}

std::string render(const UnionQuery& q) {
    std::string s;
    for (size_t i = 0; i < q.disjuncts.size(); ++i) {
        if (i) s += "or\n";
        auto& d = q.disjuncts[i];
        std::string head = "q(";
        for (size_t j = 0; j < d.answer_vars.size(); ++j) {
            if (j) head += ",";
            head += d.answer_vars[j];
        }
        head += ")";
        s += head + " :- ";
        for (size_t j = 0; j < d.atoms.size(); ++j) {
            if (j) s += ", ";
            s += render(d.atoms[j]);
        }
        s += ".\n";
    }
    return s;
}

std::string render(const MmsnpSentence& s0) {
    std::string s = "mmsnp {\n";
    if (!s0.so_vars.empty()) {
        s += "  exists ";
        for (size_t i = 0; i < s0.so_vars.size(); ++i) {
            if (i) s += ",";
            s += s0.so_vars[i];
        }
        s += ".\n";
    }
    if (!s0.fo_vars.empty()) {
        s += "  forall ";
        for (size_t i = 0; i < s0.fo_vars.size(); ++i) {
            if (i) s += ",";
            s += s0.fo_vars[i];
        }
        s += ".\n";
    }
    for (auto& imp : s0.implications) {
        s += "  ";
        if (imp.head.empty()) s += "false";
        for (size_t i = 0; i < imp.head.size(); ++i) {
            if (i) s += " v ";
            s += render(imp.head[i]);
        }
        s += " <- ";
        for (size_t i = 0; i < imp.body.size(); ++i) {
            if (i) s += ", ";
            s += render(imp.body[i]);
        }
        s += ".\n";
    }
    return s + "}\n";
}

}  // namespace mddlog
