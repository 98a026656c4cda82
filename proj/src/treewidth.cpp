#include "tl/treewidth.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "tl/error.hpp"

namespace tl {

std::set<int> Atom::vars() const {
    switch (kind) {
    case Kind::Edge:
    case Kind::Eq:
        return {i, j};
    case Kind::Label:
        return {i};
    case Kind::Opaque:
        return free_vars(opaque);
    }
    return {};
}

ExprPtr Atom::to_expr() const {
    switch (kind) {
    case Kind::Edge:
        return edge_pred(i, j);
    case Kind::Label:
        return label_pred(s, i);
    case Kind::Eq:
        return eq_pred(i, j);
    case Kind::Opaque:
        return opaque;
    }
    throw Error("atom: unknown kind");
}

std::string Atom::key() const {
    switch (kind) {
    case Kind::Edge:
        return "E" + std::to_string(std::min(i, j)) + "," + std::to_string(std::max(i, j));
    case Kind::Label:
        return "P" + std::to_string(s) + "@" + std::to_string(i);
    case Kind::Eq:
        return "Q" + std::to_string(std::min(i, j)) + "," + std::to_string(std::max(i, j));
    case Kind::Opaque:
        return "O" + std::to_string(reinterpret_cast<std::uintptr_t>(opaque.get()));
    }
    return "";
}

namespace {

struct Conj {
    Rational coeff;
    std::vector<Atom> atoms;
    std::set<int> bound;
};

// Rename every binder to a fresh index so bound variables never collide when
// conjuncts merge under products; honors shadowing.
class AlphaRenamer {
public:
    explicit AlphaRenamer(int first_fresh) : next_(first_fresh) {}

    ExprPtr run(const ExprPtr& e) { return walk(e, {}); }

private:
    int next_;

    int map_var(const std::map<int, int>& env, int v) const {
        auto it = env.find(v);
        return it == env.end() ? v : it->second;
    }

    ExprPtr walk(const ExprPtr& e, std::map<int, int> env) {
        switch (e->kind) {
        case ExprKind::EqPred:
            return eq_pred(map_var(env, e->i), map_var(env, e->j), e->neq);
        case ExprKind::EdgePred:
            return edge_pred(map_var(env, e->i), map_var(env, e->j));
        case ExprKind::LabelPred:
            return label_pred(e->s, map_var(env, e->i));
        case ExprKind::One:
            return e;
        case ExprKind::Product:
            return product(walk(e->lhs, env), walk(e->rhs, env));
        case ExprKind::Add:
            return add(walk(e->lhs, env), walk(e->rhs, env));
        case ExprKind::Scale:
            return scale(e->a, walk(e->body, env));
        case ExprKind::Apply: {
            std::vector<ExprPtr> args;
            for (const auto& a : e->args) args.push_back(walk(a, env));
            return apply(e->name, std::move(args));
        }
        case ExprKind::SumAgg: {
            int fresh = next_++;
            env[e->var] = fresh;
            return sum_agg(fresh, walk(e->body, env));
        }
        case ExprKind::UncondAgg: {
            int fresh = next_++;
            env[e->var] = fresh;
            return uncond_agg(e->name, fresh, walk(e->body, env));
        }
        case ExprKind::GuardedAgg: {
            int gf = map_var(env, e->guard_free);
            int fresh = next_++;
            env[e->var] = fresh;
            return guarded_agg(e->name, gf, fresh, walk(e->body, env));
        }
        }
        throw Error("alpha rename: unknown node");
    }
};

bool atom_contains(const Atom& a, int v) { return a.vars().count(v) != 0; }

void substitute_var(Conj& c, int from, int to) {
    std::vector<Atom> kept;
    for (Atom& a : c.atoms) {
        if (a.kind == Atom::Kind::Opaque) {
            if (atom_contains(a, from)) a.opaque = subst_free_vars(a.opaque, {{from, to}});
            kept.push_back(a);
            continue;
        }
        if (a.i == from) a.i = to;
        if ((a.kind == Atom::Kind::Edge || a.kind == Atom::Kind::Eq) && a.j == from) a.j = to;
        if (a.kind == Atom::Kind::Eq && a.i == a.j) continue; // 1_{x=x} = 1
        kept.push_back(a);
    }
    c.atoms = std::move(kept);
}

// E(x,x) never holds on simple graphs, so the conjunct vanishes.
bool conjunct_is_zero(const Conj& c) {
    for (const Atom& a : c.atoms)
        if (a.kind == Atom::Kind::Edge && a.i == a.j) return true;
    return false;
}

using NfBuilder = std::function<ExprPtr(const ExprPtr&)>;

std::vector<Conj> nf_rec(const ExprPtr& e, OpaquePolicy policy, const NfBuilder& inner_rewrite) {
    switch (e->kind) {
    case ExprKind::One:
        return {Conj{Rational(1), {}, {}}};
    case ExprKind::EqPred: {
        if (e->i == e->j) {
            if (e->neq) return {}; // 1_{x != x} = 0
            return {Conj{Rational(1), {}, {}}};
        }
        Atom eq{Atom::Kind::Eq, e->i, e->j, 0, nullptr};
        if (!e->neq) return {Conj{Rational(1), {eq}, {}}};
        // 1_{x != y} = 1 - 1_{x = y}
        return {Conj{Rational(1), {}, {}}, Conj{Rational(-1), {eq}, {}}};
    }
    case ExprKind::EdgePred:
        return {Conj{Rational(1), {Atom{Atom::Kind::Edge, e->i, e->j, 0, nullptr}}, {}}};
    case ExprKind::LabelPred:
        return {Conj{Rational(1), {Atom{Atom::Kind::Label, e->i, 0, e->s, nullptr}}, {}}};
    case ExprKind::Add: {
        auto l = nf_rec(e->lhs, policy, inner_rewrite);
        auto r = nf_rec(e->rhs, policy, inner_rewrite);
        l.insert(l.end(), r.begin(), r.end());
        return l;
    }
    case ExprKind::Scale: {
        if (e->a.is_zero()) return {};
        auto body = nf_rec(e->body, policy, inner_rewrite);
        for (auto& c : body) c.coeff *= e->a;
        return body;
    }
    case ExprKind::Product: {
        auto l = nf_rec(e->lhs, policy, inner_rewrite);
        auto r = nf_rec(e->rhs, policy, inner_rewrite);
        std::vector<Conj> out;
        for (const auto& cl : l) {
            for (const auto& cr : r) {
                Conj c;
                c.coeff = cl.coeff * cr.coeff;
                c.atoms = cl.atoms;
                c.atoms.insert(c.atoms.end(), cr.atoms.begin(), cr.atoms.end());
                c.bound = cl.bound;
                c.bound.insert(cr.bound.begin(), cr.bound.end());
                out.push_back(std::move(c));
            }
        }
        return out;
    }
    case ExprKind::SumAgg: {
        auto body = nf_rec(e->body, policy, inner_rewrite);
        std::vector<Conj> out;
        for (Conj c : body) {
            // an equality with the summed variable collapses the summation
            int partner = 0;
            bool found = false;
            std::size_t eq_at = 0;
            for (std::size_t t = 0; t < c.atoms.size(); ++t) {
                const Atom& a = c.atoms[t];
                if (a.kind != Atom::Kind::Eq) continue;
                if (a.i == e->var || a.j == e->var) {
                    int other = a.i == e->var ? a.j : a.i;
                    if (!found || other < partner) {
                        partner = other;
                        found = true;
                        eq_at = t;
                    }
                }
            }
            if (found) {
                c.atoms.erase(c.atoms.begin() + static_cast<long>(eq_at));
                substitute_var(c, e->var, partner);
                if (conjunct_is_zero(c)) continue;
                out.push_back(std::move(c));
                continue;
            }
            bool used = false;
            for (const Atom& a : c.atoms)
                if (atom_contains(a, e->var)) used = true;
            if (!used) {
                // a sum over an unused variable contributes a factor n; keep
                // the variable alive through a 1_{x=x} atom
                c.atoms.push_back(Atom{Atom::Kind::Eq, e->var, e->var, 0, nullptr});
            }
            c.bound.insert(e->var);
            out.push_back(std::move(c));
        }
        return out;
    }
    case ExprKind::Apply: {
        ExprPtr node = e;
        if (inner_rewrite) {
            std::vector<ExprPtr> args;
            for (const auto& a : e->args) args.push_back(inner_rewrite(a));
            node = apply(e->name, std::move(args));
        }
        return {Conj{Rational(1), {Atom{Atom::Kind::Opaque, 0, 0, 0, node}}, {}}};
    }
    case ExprKind::UncondAgg:
    case ExprKind::GuardedAgg: {
        if (policy != OpaquePolicy::FunctionsAndAggregates)
            throw Error("normalize: general aggregation '" + e->name +
                        "' has no conjunctive normal form");
        ExprPtr node = e;
        if (inner_rewrite) {
            auto body = inner_rewrite(e->body);
            node = e->kind == ExprKind::UncondAgg
                       ? uncond_agg(e->name, e->var, body)
                       : guarded_agg(e->name, e->guard_free, e->var, body);
        }
        return {Conj{Rational(1), {Atom{Atom::Kind::Opaque, 0, 0, 0, node}}, {}}};
    }
    }
    throw Error("normalize: unknown node");
}

// Merge conjuncts with identical atom multisets; drop zero coefficients.
std::vector<Conj> merge_conjuncts(std::vector<Conj> cs) {
    std::map<std::string, std::size_t> index;
    std::vector<Conj> out;
    for (auto& c : cs) {
        std::vector<std::string> keys;
        for (const auto& a : c.atoms) keys.push_back(a.key());
        std::sort(keys.begin(), keys.end());
        std::string sig;
        for (const auto& k : keys) {
            sig += k;
            sig += '|';
        }
        sig += '#';
        for (int b : c.bound) sig += std::to_string(b) + ",";
        auto it = index.find(sig);
        if (it == index.end()) {
            index.emplace(sig, out.size());
            out.push_back(std::move(c));
        } else {
            out[it->second].coeff += c.coeff;
        }
    }
    std::vector<Conj> nz;
    for (auto& c : out)
        if (!c.coeff.is_zero()) nz.push_back(std::move(c));
    return nz;
}

NormalForm build_normal_form(const ExprPtr& e, OpaquePolicy policy,
                             const NfBuilder& inner_rewrite) {
    auto fv = free_vars(e);
    int first_fresh = 1;
    for (int v : all_vars(e)) first_fresh = std::max(first_fresh, v + 1);
    AlphaRenamer renamer(first_fresh);
    ExprPtr renamed = renamer.run(e);
    auto conjs = merge_conjuncts(nf_rec(renamed, policy, inner_rewrite));
    NormalForm nf;
    nf.free_vars = fv;
    for (auto& c : conjs) {
        ConjunctiveExpr ce;
        ce.coeff = c.coeff;
        ce.atoms = std::move(c.atoms);
        ce.bound_vars = std::move(c.bound);
        for (const auto& a : ce.atoms)
            for (int v : a.vars())
                if (!ce.bound_vars.count(v)) ce.free_vars.insert(v);
        nf.conjuncts.push_back(std::move(ce));
    }
    return nf;
}

} // namespace

NormalForm normalize(const ExprPtr& e, OpaquePolicy policy) {
    return build_normal_form(e, policy, nullptr);
}

ExprPtr normal_form_to_expr(const NormalForm& nf) {
    if (nf.conjuncts.empty()) return scale(Rational(0), one());
    std::vector<ExprPtr> terms;
    for (const auto& c : nf.conjuncts) {
        std::vector<ExprPtr> factors;
        for (const auto& a : c.atoms) factors.push_back(a.to_expr());
        ExprPtr body = product_fold(factors);
        for (auto it = c.bound_vars.rbegin(); it != c.bound_vars.rend(); ++it)
            body = sum_agg(*it, body);
        terms.push_back(c.coeff == Rational(1) ? body : scale(c.coeff, body));
    }
    return add_fold(terms);
}

Hypergraph hypergraph_of(const ConjunctiveExpr& c) {
    Hypergraph h;
    std::set<int> verts;
    for (const auto& a : c.atoms) {
        auto vs = a.vars();
        verts.insert(vs.begin(), vs.end());
        h.edges.emplace_back(vs.begin(), vs.end());
    }
    verts.insert(c.free_vars.begin(), c.free_vars.end());
    verts.insert(c.bound_vars.begin(), c.bound_vars.end());
    h.vertices.assign(verts.begin(), verts.end());
    h.distinguished = c.free_vars;
    return h;
}

namespace {

// Classic induced width of the elimination sequence: process sigma back to
// front, record |U_j|; width = max |U_j| - 1. Distinguished vertices are
// pinned to the front of sigma (eliminated last).
std::pair<int, std::vector<int>> simulate_width(const Hypergraph& h,
                                                const std::vector<int>& sigma) {
    std::vector<std::vector<int>> edges = h.edges;
    std::vector<int> u_sizes(sigma.size(), 0);
    int width = 0;
    for (int pos = static_cast<int>(sigma.size()) - 1; pos >= 0; --pos) {
        int v = sigma[pos];
        std::set<int> u;
        std::vector<std::vector<int>> rest;
        for (auto& f : edges) {
            if (std::find(f.begin(), f.end(), v) != f.end())
                u.insert(f.begin(), f.end());
            else
                rest.push_back(std::move(f));
        }
        if (u.empty()) u.insert(v); // isolated vertex still occupies its own bag
        u_sizes[pos] = static_cast<int>(u.size());
        width = std::max(width, static_cast<int>(u.size()) - 1);
        u.erase(v);
        if (!u.empty()) rest.emplace_back(u.begin(), u.end());
        edges = std::move(rest);
    }
    return {width, u_sizes};
}

std::vector<int> min_fill_order(const Hypergraph& h, const std::vector<int>& bound) {
    // primal graph over all vertices
    std::set<std::pair<int, int>> adj;
    auto connect = [&](int a, int b) {
        if (a == b) return;
        adj.insert({std::min(a, b), std::max(a, b)});
    };
    for (const auto& f : h.edges)
        for (std::size_t a = 0; a < f.size(); ++a)
            for (std::size_t b = a + 1; b < f.size(); ++b) connect(f[a], f[b]);
    std::set<int> remaining(bound.begin(), bound.end());
    std::set<int> all(h.vertices.begin(), h.vertices.end());
    std::vector<int> elim;
    while (!remaining.empty()) {
        int best = -1;
        long best_fill = -1;
        for (int v : remaining) {
            std::vector<int> nbr;
            for (int u : all)
                if (u != v && adj.count({std::min(u, v), std::max(u, v)})) nbr.push_back(u);
            long fill = 0;
            for (std::size_t a = 0; a < nbr.size(); ++a)
                for (std::size_t b = a + 1; b < nbr.size(); ++b)
                    if (!adj.count({std::min(nbr[a], nbr[b]), std::max(nbr[a], nbr[b])})) ++fill;
            if (best < 0 || fill < best_fill || (fill == best_fill && v < best)) {
                best = v;
                best_fill = fill;
            }
        }
        std::vector<int> nbr;
        for (int u : all)
            if (u != best && adj.count({std::min(u, best), std::max(u, best)})) nbr.push_back(u);
        for (std::size_t a = 0; a < nbr.size(); ++a)
            for (std::size_t b = a + 1; b < nbr.size(); ++b) connect(nbr[a], nbr[b]);
        remaining.erase(best);
        all.erase(best);
        elim.push_back(best);
    }
    return elim;
}

} // namespace

EliminationOrder elimination_order(const Hypergraph& h, ElimStrategy strategy) {
    std::vector<int> dist(h.distinguished.begin(), h.distinguished.end());
    std::vector<int> bound;
    for (int v : h.vertices)
        if (!h.distinguished.count(v)) bound.push_back(v);

    EliminationOrder best;
    if (strategy == ElimStrategy::Exhaustive) {
        if (bound.size() > 10)
            throw Error("exhaustive elimination order limited to 10 bound variables");
        if (bound.empty()) {
            best.order = dist;
            if (!dist.empty()) {
                auto [w, u] = simulate_width(h, best.order);
                best.induced_width = w;
                best.u_sizes = u;
            }
            best.exact = true;
            return best;
        }
        std::vector<int> perm = bound; // sorted ascending; permutations in lex order
        bool first = true;
        do {
            std::vector<int> sigma = dist;
            // the first-eliminated variable sits last in sigma
            sigma.insert(sigma.end(), perm.rbegin(), perm.rend());
            auto [w, u_sizes] = simulate_width(h, sigma);
            if (first || w < best.induced_width ||
                (w == best.induced_width && sigma < best.order)) {
                best.order = sigma;
                best.u_sizes = u_sizes;
                best.induced_width = w;
                first = false;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        best.exact = true;
    } else {
        auto elim = min_fill_order(h, bound);
        std::vector<int> sigma = dist;
        sigma.insert(sigma.end(), elim.rbegin(), elim.rend());
        auto [w, u_sizes] = simulate_width(h, sigma);
        best.order = sigma;
        best.u_sizes = u_sizes;
        best.induced_width = w;
        best.exact = false;
    }
    return best;
}

TreeDecomposition decomposition_from_order(const Hypergraph& h, const EliminationOrder& order) {
    // bag_j = U_j of the elimination step; bag_j connects to the bag of the
    // first later-eliminated (earlier-in-sigma) vertex among U_j \ {v_j}
    TreeDecomposition td;
    const auto& sigma = order.order;
    std::map<int, int> pos;
    for (std::size_t p = 0; p < sigma.size(); ++p) pos[sigma[p]] = static_cast<int>(p);
    std::vector<std::vector<int>> edges = h.edges;
    std::vector<std::set<int>> bags(sigma.size());
    for (int p = static_cast<int>(sigma.size()) - 1; p >= 0; --p) {
        int v = sigma[p];
        std::set<int> u;
        std::vector<std::vector<int>> rest;
        for (auto& f : edges) {
            if (std::find(f.begin(), f.end(), v) != f.end())
                u.insert(f.begin(), f.end());
            else
                rest.push_back(std::move(f));
        }
        u.insert(v);
        bags[p] = u;
        u.erase(v);
        if (!u.empty()) rest.emplace_back(u.begin(), u.end());
        edges = std::move(rest);
    }
    for (std::size_t p = 0; p < sigma.size(); ++p) {
        td.bags.emplace_back(bags[p].begin(), bags[p].end());
        td.width = std::max(td.width, static_cast<int>(bags[p].size()) - 1);
        int parent = -1;
        for (int u : bags[p])
            if (u != sigma[p] && pos[u] < static_cast<int>(p) && (parent < 0 || pos[u] > parent))
                parent = pos[u];
        if (parent < 0 && p > 0) parent = static_cast<int>(p) - 1; // keep the tree connected
        if (parent >= 0) td.tree_edges.emplace_back(parent, static_cast<int>(p));
    }
    return td;
}

bool valid_decomposition(const Hypergraph& h, const TreeDecomposition& td) {
    for (const auto& f : h.edges) {
        bool covered = false;
        for (const auto& bag : td.bags) {
            bool inside = true;
            for (int v : f)
                if (std::find(bag.begin(), bag.end(), v) == bag.end()) inside = false;
            if (inside) covered = true;
        }
        if (!covered) return false;
    }
    // connectedness of each non-distinguished vertex's bag set
    for (int v : h.vertices) {
        if (h.distinguished.count(v)) continue;
        std::set<int> holding;
        for (std::size_t b = 0; b < td.bags.size(); ++b)
            if (std::find(td.bags[b].begin(), td.bags[b].end(), v) != td.bags[b].end())
                holding.insert(static_cast<int>(b));
        if (holding.empty()) return false;
        std::set<int> seen = {*holding.begin()};
        bool grew = true;
        while (grew) {
            grew = false;
            for (auto [a, b] : td.tree_edges) {
                if (seen.count(a) && holding.count(b) && !seen.count(b)) {
                    seen.insert(b);
                    grew = true;
                }
                if (seen.count(b) && holding.count(a) && !seen.count(a)) {
                    seen.insert(a);
                    grew = true;
                }
            }
        }
        if (seen.size() != holding.size()) return false;
    }
    return true;
}

namespace {

struct WidthAccum {
    int width = 0;
    bool exact = true;
};

void conjunct_width(const ConjunctiveExpr& c, WidthAccum& acc) {
    Hypergraph h = hypergraph_of(c);
    std::size_t bound = 0;
    for (int v : h.vertices)
        if (!h.distinguished.count(v)) ++bound;
    auto eo = elimination_order(h, bound <= 10 ? ElimStrategy::Exhaustive : ElimStrategy::MinFill);
    acc.width = std::max(acc.width, eo.induced_width);
    acc.exact = acc.exact && eo.exact;
}

void treewidth_rec(const ExprPtr& e, WidthAccum& acc) {
    NormalForm nf = normalize(e, OpaquePolicy::FunctionsOnly);
    for (const auto& c : nf.conjuncts) {
        conjunct_width(c, acc);
        // recurse into the arguments of placeholder predicates
        for (const auto& a : c.atoms) {
            if (a.kind != Atom::Kind::Opaque) continue;
            for (const auto& arg : a.opaque->args) treewidth_rec(arg, acc);
        }
    }
}

} // namespace

TreewidthResult treewidth(const ExprPtr& e) {
    WidthAccum acc;
    treewidth_rec(e, acc);
    return {acc.width, acc.exact};
}

namespace {

// Emit the factored expression of one conjunct along its elimination order.
// Atoms keep their renamed-apart variable names; compaction happens later.
ExprPtr factor_conjunct(const ConjunctiveExpr& c) {
    Hypergraph h = hypergraph_of(c);
    auto eo = elimination_order(
        h, c.bound_vars.size() <= 10 ? ElimStrategy::Exhaustive : ElimStrategy::MinFill);

    struct Part {
        ExprPtr expr;
        std::set<int> vars;
        int rank; // Edge < Label < Eq < Opaque/pseudo, then creation order
        int seq;
    };
    std::vector<Part> parts;
    int seq = 0;
    auto rank_of = [](const Atom& a) {
        switch (a.kind) {
        case Atom::Kind::Edge:
            return 0;
        case Atom::Kind::Label:
            return 1;
        case Atom::Kind::Eq:
            return 2;
        case Atom::Kind::Opaque:
            return 3;
        }
        return 3;
    };
    for (const auto& a : c.atoms) parts.push_back({a.to_expr(), a.vars(), rank_of(a), seq++});

    auto fold_sorted = [](std::vector<Part> ps) {
        std::stable_sort(ps.begin(), ps.end(), [](const Part& x, const Part& y) {
            if (x.rank != y.rank) return x.rank < y.rank;
            return x.seq < y.seq;
        });
        std::vector<ExprPtr> es;
        for (auto& p : ps) es.push_back(p.expr);
        return product_fold(es);
    };

    // eliminate from the back of sigma: bound variables only
    for (int pos = static_cast<int>(eo.order.size()) - 1; pos >= 0; --pos) {
        int v = eo.order[pos];
        if (c.free_vars.count(v)) continue;
        std::vector<Part> with_v, rest;
        for (auto& p : parts)
            (p.vars.count(v) ? with_v : rest).push_back(std::move(p));
        std::set<int> u;
        for (const auto& p : with_v) u.insert(p.vars.begin(), p.vars.end());
        u.erase(v);
        ExprPtr inner = sum_agg(v, fold_sorted(std::move(with_v)));
        rest.push_back({inner, u, 3, seq++});
        parts = std::move(rest);
    }
    ExprPtr prod = fold_sorted(std::move(parts));
    return c.coeff == Rational(1) ? prod : scale(c.coeff, prod);
}

// Greedy reuse of variable indices under shadowing: each binder takes the
// smallest index not assigned to a variable free in its body.
class Compactor {
public:
    ExprPtr run(const ExprPtr& e) {
        std::map<int, int> env;
        for (int v : free_vars(e)) env[v] = v; // free variables keep their names
        return walk(e, env);
    }

private:
    static int pick_fresh(const ExprPtr& body, int binder, const std::map<int, int>& env) {
        std::set<int> used;
        auto fv = free_vars(body);
        fv.erase(binder);
        for (int v : fv) {
            auto it = env.find(v);
            used.insert(it == env.end() ? v : it->second);
        }
        int idx = 1;
        while (used.count(idx)) ++idx;
        return idx;
    }

    ExprPtr walk(const ExprPtr& e, std::map<int, int> env) {
        switch (e->kind) {
        case ExprKind::EqPred:
            return eq_pred(env.at(e->i), env.at(e->j), e->neq);
        case ExprKind::EdgePred:
            return edge_pred(env.at(e->i), env.at(e->j));
        case ExprKind::LabelPred:
            return label_pred(e->s, env.at(e->i));
        case ExprKind::One:
            return e;
        case ExprKind::Product:
            return product(walk(e->lhs, env), walk(e->rhs, env));
        case ExprKind::Add:
            return add(walk(e->lhs, env), walk(e->rhs, env));
        case ExprKind::Scale:
            return scale(e->a, walk(e->body, env));
        case ExprKind::Apply: {
            std::vector<ExprPtr> args;
            for (const auto& a : e->args) args.push_back(walk(a, env));
            return apply(e->name, std::move(args));
        }
        case ExprKind::SumAgg:
        case ExprKind::UncondAgg: {
            int fresh = pick_fresh(e->body, e->var, env);
            env[e->var] = fresh;
            auto body = walk(e->body, env);
            return e->kind == ExprKind::SumAgg ? sum_agg(fresh, body)
                                               : uncond_agg(e->name, fresh, body);
        }
        case ExprKind::GuardedAgg: {
            int gf = env.at(e->guard_free);
            int fresh = gf == 1 ? 2 : 1;
            env[e->var] = fresh;
            return guarded_agg(e->name, gf, fresh, walk(e->body, env));
        }
        }
        throw Error("compaction: unknown node");
    }
};

ExprPtr rewrite_rec(const ExprPtr& e);

// Factor a maximal summation-product region, treating function applications
// and aggregations (with rewritten insides) as opaque predicates.
ExprPtr factor_region(const ExprPtr& e) {
    NfBuilder inner = [](const ExprPtr& sub) { return rewrite_rec(sub); };
    NormalForm nf = build_normal_form(e, OpaquePolicy::FunctionsAndAggregates, inner);
    if (nf.conjuncts.empty()) return scale(Rational(0), one());
    std::vector<ExprPtr> terms;
    for (const auto& c : nf.conjuncts) terms.push_back(factor_conjunct(c));
    return add_fold(terms);
}

ExprPtr rewrite_rec(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::EqPred:
    case ExprKind::EdgePred:
    case ExprKind::LabelPred:
    case ExprKind::One:
        return e;
    case ExprKind::Product:
    case ExprKind::Add:
    case ExprKind::Scale:
    case ExprKind::SumAgg:
        return factor_region(e);
    case ExprKind::Apply: {
        std::vector<ExprPtr> args;
        for (const auto& a : e->args) args.push_back(rewrite_rec(a));
        return apply(e->name, std::move(args));
    }
    case ExprKind::UncondAgg:
        return uncond_agg(e->name, e->var, rewrite_rec(e->body));
    case ExprKind::GuardedAgg:
        return guarded_agg(e->name, e->guard_free, e->var, rewrite_rec(e->body));
    }
    throw Error("rewrite: unknown node");
}

} // namespace

ExprPtr rewrite_min_vars(const ExprPtr& e) {
    RewriteReport report;
    return rewrite_min_vars(e, report);
}

ExprPtr rewrite_min_vars(const ExprPtr& e, RewriteReport& report) {
    report.vars_before = static_cast<int>(all_vars(e).size());
    try {
        auto tw = treewidth(e);
        report.width = tw.width;
        report.exact = tw.exact;
    } catch (const Error&) {
        report.width = -1; // general aggregations block the conjunctive analysis
        report.exact = false;
    }
    ExprPtr rewritten = rewrite_rec(e);
    ExprPtr compact = Compactor().run(rewritten);
    report.vars_after = static_cast<int>(all_vars(compact).size());
    return compact;
}

ExprPtr reduce_ign_term(const ExprPtr& term, int k) {
    if (k < 1 || k > 3) throw Error("reduce_ign_term supports 1 <= k <= 3");
    // peel exactly k summations
    std::vector<int> ys;
    ExprPtr cur = term;
    while (cur->kind == ExprKind::SumAgg && static_cast<int>(ys.size()) < k) {
        ys.push_back(cur->var);
        cur = cur->body;
    }
    if (static_cast<int>(ys.size()) != k)
        throw Error("reduce_ign_term: expected exactly " + std::to_string(k) +
                    " leading summations");
    std::set<int> yset(ys.begin(), ys.end());
    if (yset.size() != ys.size()) throw Error("reduce_ign_term: repeated bound variable");

    // split the product spine into (dis)equality factors and the body phi
    std::vector<ExprPtr> spine;
    ExprPtr walk = cur;
    while (walk->kind == ExprKind::Product) {
        spine.push_back(walk->rhs);
        walk = walk->lhs;
    }
    spine.push_back(walk);
    std::reverse(spine.begin(), spine.end());
    std::vector<std::pair<int, int>> eqs, neqs;
    std::vector<ExprPtr> phi_factors;
    for (const auto& f : spine) {
        if (f->kind == ExprKind::EqPred && f->i != f->j) {
            (f->neq ? neqs : eqs).emplace_back(f->i, f->j);
        } else {
            phi_factors.push_back(f);
        }
    }
    ExprPtr phi = product_fold(phi_factors);
    for (int v : free_vars(phi))
        if (!yset.count(v)) throw Error("reduce_ign_term: body may only use the bound variables");
    std::set<int> xs; // free variables of the whole pattern
    for (auto [a, b] : eqs) {
        if (!yset.count(a)) xs.insert(a);
        if (!yset.count(b)) xs.insert(b);
    }
    for (auto [a, b] : neqs) {
        if (!yset.count(a)) xs.insert(a);
        if (!yset.count(b)) xs.insert(b);
    }
    if (static_cast<int>(xs.size()) > k)
        throw Error("reduce_ign_term: more than k free variables in the pattern");

    // union-find closure of an equality pair set over all pattern variables
    auto closure = [&](const std::vector<std::pair<int, int>>& pairs) {
        std::map<int, int> parent;
        std::function<int(int)> find = [&](int v) -> int {
            auto it = parent.find(v);
            if (it == parent.end() || it->second == v) {
                parent[v] = v;
                return v;
            }
            return parent[v] = find(it->second);
        };
        for (int y : ys) find(y);
        for (int x : xs) find(x);
        for (auto [a, b] : pairs) {
            int ra = find(a), rb = find(b);
            if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
        }
        std::map<int, std::vector<int>> classes;
        std::vector<int> keys;
        for (const auto& [v, p] : parent) {
            (void)p;
            keys.push_back(v);
        }
        for (int v : keys) classes[find(v)].push_back(v);
        return classes;
    };

    // reject inconsistent patterns (a != b forced equal by the equalities)
    {
        auto classes = closure(eqs);
        std::map<int, int> cls_of;
        for (const auto& [rep, members] : classes)
            for (int m : members) cls_of[m] = rep;
        for (auto [a, b] : neqs)
            if (cls_of.at(a) == cls_of.at(b))
                throw Error("reduce_ign_term: inconsistent equality pattern");
    }

    // inclusion-exclusion over disequality subsets
    std::vector<ExprPtr> signed_terms;
    const std::size_t subsets = std::size_t(1) << neqs.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<std::pair<int, int>> pairs = eqs;
        int sign = 1;
        for (std::size_t b = 0; b < neqs.size(); ++b) {
            if (mask & (std::size_t(1) << b)) {
                pairs.push_back(neqs[b]);
                sign = -sign;
            }
        }
        auto classes = closure(pairs);

        // equalities among the x variables stay as outer factors
        std::vector<ExprPtr> outer;
        std::map<int, int> x_rep; // class rep -> smallest x in the class
        for (const auto& [rep, members] : classes) {
            std::vector<int> xm;
            for (int m : members)
                if (xs.count(m)) xm.push_back(m);
            if (xm.empty()) continue;
            std::sort(xm.begin(), xm.end());
            x_rep[rep] = xm[0];
            for (std::size_t t = 1; t < xm.size(); ++t) outer.push_back(eq_pred(xm[0], xm[t]));
        }

        // bind y classes: x-tied classes substitute their representative;
        // pure-y classes get a summation over a non-colliding x index
        std::map<int, int> subst;
        for (const auto& [rep, members] : classes) {
            auto it = x_rep.find(rep);
            if (it == x_rep.end()) continue;
            for (int m : members)
                if (yset.count(m)) subst[m] = it->second;
        }
        std::set<int> used_targets;
        for (int v : free_vars(phi))
            if (subst.count(v)) used_targets.insert(subst[v]);
        std::vector<int> sum_vars;
        for (const auto& [rep, members] : classes) {
            if (x_rep.count(rep)) continue;
            bool has_y = false;
            for (int m : members)
                if (yset.count(m)) has_y = true;
            if (!has_y) continue;
            int target = 1;
            while (used_targets.count(target)) ++target;
            used_targets.insert(target);
            sum_vars.push_back(target);
            for (int m : members)
                if (yset.count(m)) subst[m] = target;
        }

        ExprPtr body = subst_free_vars(phi, subst);
        std::sort(sum_vars.begin(), sum_vars.end());
        for (auto it = sum_vars.rbegin(); it != sum_vars.rend(); ++it) body = sum_agg(*it, body);
        std::vector<ExprPtr> all_factors = outer;
        all_factors.push_back(body);
        ExprPtr t = product_fold(all_factors);
        signed_terms.push_back(sign > 0 ? t : scale(Rational(-1), t));
    }
    return add_fold(signed_terms);
}

} // namespace tl
