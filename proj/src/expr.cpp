#include "tl/expr.hpp"

#include <algorithm>

#include "tl/error.hpp"

namespace tl {

namespace {

std::shared_ptr<Expr> node(ExprKind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

void check_var(int v) {
    if (v < 1) throw Error("variable index must be >= 1");
}

} // namespace

ExprPtr eq_pred(int i, int j, bool neq) {
    check_var(i);
    check_var(j);
    auto e = node(ExprKind::EqPred);
    e->i = i;
    e->j = j;
    e->neq = neq;
    return e;
}

ExprPtr edge_pred(int i, int j) {
    check_var(i);
    check_var(j);
    auto e = node(ExprKind::EdgePred);
    e->i = i;
    e->j = j;
    return e;
}

ExprPtr label_pred(int s, int i) {
    if (s < 1) throw Error("label position must be >= 1");
    check_var(i);
    auto e = node(ExprKind::LabelPred);
    e->s = s;
    e->i = i;
    return e;
}

ExprPtr one() { return node(ExprKind::One); }

ExprPtr product(ExprPtr l, ExprPtr r) {
    auto e = node(ExprKind::Product);
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

ExprPtr add(ExprPtr l, ExprPtr r) {
    auto e = node(ExprKind::Add);
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

ExprPtr sub(ExprPtr l, ExprPtr r) { return add(std::move(l), scale(Rational(-1), std::move(r))); }

ExprPtr scale(Rational a, ExprPtr e) {
    auto s = node(ExprKind::Scale);
    s->a = std::move(a);
    s->body = std::move(e);
    return s;
}

ExprPtr apply(std::string name, std::vector<ExprPtr> args) {
    auto e = node(ExprKind::Apply);
    e->name = std::move(name);
    e->args = std::move(args);
    return e;
}

ExprPtr sum_agg(int var, ExprPtr body) {
    check_var(var);
    auto e = node(ExprKind::SumAgg);
    e->var = var;
    e->body = std::move(body);
    return e;
}

ExprPtr uncond_agg(std::string agg, int var, ExprPtr body) {
    check_var(var);
    auto e = node(ExprKind::UncondAgg);
    e->name = std::move(agg);
    e->var = var;
    e->body = std::move(body);
    return e;
}

ExprPtr guarded_agg(std::string agg, int guard_free, int bound, ExprPtr body) {
    check_var(guard_free);
    check_var(bound);
    auto fv = free_vars(body);
    fv.erase(bound);
    if (!fv.empty())
        throw Error("guarded aggregation body may only use the bound variable x" +
                    std::to_string(bound));
    auto e = node(ExprKind::GuardedAgg);
    e->name = std::move(agg);
    e->guard_free = guard_free;
    e->var = bound;
    e->body = std::move(body);
    return e;
}

ExprPtr product_fold(const std::vector<ExprPtr>& factors) {
    if (factors.empty()) return one();
    ExprPtr acc = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) acc = product(acc, factors[i]);
    return acc;
}

ExprPtr add_fold(const std::vector<ExprPtr>& terms) {
    if (terms.empty()) throw Error("add_fold: empty term list");
    ExprPtr acc = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) acc = add(acc, terms[i]);
    return acc;
}

bool structural_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case ExprKind::EqPred:
        return a->i == b->i && a->j == b->j && a->neq == b->neq;
    case ExprKind::EdgePred:
        return a->i == b->i && a->j == b->j;
    case ExprKind::LabelPred:
        return a->s == b->s && a->i == b->i;
    case ExprKind::One:
        return true;
    case ExprKind::Product:
    case ExprKind::Add:
        return structural_equal(a->lhs, b->lhs) && structural_equal(a->rhs, b->rhs);
    case ExprKind::Scale:
        return a->a == b->a && structural_equal(a->body, b->body);
    case ExprKind::Apply: {
        if (a->name != b->name || a->args.size() != b->args.size()) return false;
        for (std::size_t i = 0; i < a->args.size(); ++i)
            if (!structural_equal(a->args[i], b->args[i])) return false;
        return true;
    }
    case ExprKind::SumAgg:
        return a->var == b->var && structural_equal(a->body, b->body);
    case ExprKind::UncondAgg:
        return a->name == b->name && a->var == b->var && structural_equal(a->body, b->body);
    case ExprKind::GuardedAgg:
        return a->name == b->name && a->guard_free == b->guard_free && a->var == b->var &&
               structural_equal(a->body, b->body);
    }
    return false;
}

namespace {

void free_vars_rec(const ExprPtr& e, std::set<int>& out) {
    switch (e->kind) {
    case ExprKind::EqPred:
    case ExprKind::EdgePred:
        out.insert(e->i);
        out.insert(e->j);
        return;
    case ExprKind::LabelPred:
        out.insert(e->i);
        return;
    case ExprKind::One:
        return;
    case ExprKind::Product:
    case ExprKind::Add:
        free_vars_rec(e->lhs, out);
        free_vars_rec(e->rhs, out);
        return;
    case ExprKind::Scale:
        free_vars_rec(e->body, out);
        return;
    case ExprKind::Apply:
        for (const auto& a : e->args) free_vars_rec(a, out);
        return;
    case ExprKind::SumAgg:
    case ExprKind::UncondAgg: {
        std::set<int> inner;
        free_vars_rec(e->body, inner);
        inner.erase(e->var);
        out.insert(inner.begin(), inner.end());
        return;
    }
    case ExprKind::GuardedAgg:
        out.insert(e->guard_free);
        return;
    }
}

void all_vars_rec(const ExprPtr& e, std::set<int>& out) {
    switch (e->kind) {
    case ExprKind::EqPred:
    case ExprKind::EdgePred:
        out.insert(e->i);
        out.insert(e->j);
        return;
    case ExprKind::LabelPred:
        out.insert(e->i);
        return;
    case ExprKind::One:
        return;
    case ExprKind::Product:
    case ExprKind::Add:
        all_vars_rec(e->lhs, out);
        all_vars_rec(e->rhs, out);
        return;
    case ExprKind::Scale:
        all_vars_rec(e->body, out);
        return;
    case ExprKind::Apply:
        for (const auto& a : e->args) all_vars_rec(a, out);
        return;
    case ExprKind::SumAgg:
    case ExprKind::UncondAgg:
        out.insert(e->var);
        all_vars_rec(e->body, out);
        return;
    case ExprKind::GuardedAgg:
        out.insert(e->guard_free);
        out.insert(e->var);
        all_vars_rec(e->body, out);
        return;
    }
}

} // namespace

std::set<int> free_vars(const ExprPtr& e) {
    std::set<int> out;
    free_vars_rec(e, out);
    return out;
}

std::set<int> all_vars(const ExprPtr& e) {
    std::set<int> out;
    all_vars_rec(e, out);
    return out;
}

int sum_depth(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::EqPred:
    case ExprKind::EdgePred:
    case ExprKind::LabelPred:
    case ExprKind::One:
        return 0;
    case ExprKind::Product:
    case ExprKind::Add:
        return std::max(sum_depth(e->lhs), sum_depth(e->rhs));
    case ExprKind::Scale:
        return sum_depth(e->body);
    case ExprKind::Apply: {
        int d = 0;
        for (const auto& a : e->args) d = std::max(d, sum_depth(a));
        return d;
    }
    case ExprKind::SumAgg:
        return sum_depth(e->body) + 1;
    case ExprKind::UncondAgg:
    case ExprKind::GuardedAgg:
        return sum_depth(e->body); // only summation counts
    }
    return 0;
}

int agg_depth(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::EqPred:
    case ExprKind::EdgePred:
    case ExprKind::LabelPred:
    case ExprKind::One:
        return 0;
    case ExprKind::Product:
    case ExprKind::Add:
        return std::max(agg_depth(e->lhs), agg_depth(e->rhs));
    case ExprKind::Scale:
        return agg_depth(e->body);
    case ExprKind::Apply: {
        int d = 0;
        for (const auto& a : e->args) d = std::max(d, agg_depth(a));
        return d;
    }
    case ExprKind::SumAgg:
    case ExprKind::UncondAgg:
    case ExprKind::GuardedAgg:
        return agg_depth(e->body) + 1;
    }
    return 0;
}

bool function_free(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::EqPred:
    case ExprKind::EdgePred:
    case ExprKind::LabelPred:
    case ExprKind::One:
        return true;
    case ExprKind::Product:
    case ExprKind::Add:
        return function_free(e->lhs) && function_free(e->rhs);
    case ExprKind::Scale:
    case ExprKind::SumAgg:
    case ExprKind::UncondAgg:
    case ExprKind::GuardedAgg:
        return function_free(e->body);
    case ExprKind::Apply:
        return false;
    }
    return true;
}

namespace {

int map_var(const std::map<int, int>& m, int v) {
    auto it = m.find(v);
    return it == m.end() ? v : it->second;
}

ExprPtr subst_rec(const ExprPtr& e, std::map<int, int> m) {
    switch (e->kind) {
    case ExprKind::EqPred:
        return eq_pred(map_var(m, e->i), map_var(m, e->j), e->neq);
    case ExprKind::EdgePred:
        return edge_pred(map_var(m, e->i), map_var(m, e->j));
    case ExprKind::LabelPred:
        return label_pred(e->s, map_var(m, e->i));
    case ExprKind::One:
        return e;
    case ExprKind::Product:
        return product(subst_rec(e->lhs, m), subst_rec(e->rhs, m));
    case ExprKind::Add:
        return add(subst_rec(e->lhs, m), subst_rec(e->rhs, m));
    case ExprKind::Scale:
        return scale(e->a, subst_rec(e->body, m));
    case ExprKind::Apply: {
        std::vector<ExprPtr> args;
        args.reserve(e->args.size());
        for (const auto& a : e->args) args.push_back(subst_rec(a, m));
        return apply(e->name, std::move(args));
    }
    case ExprKind::SumAgg:
    case ExprKind::UncondAgg: {
        int binder = e->var;
        std::map<int, int> inner = m;
        inner.erase(binder); // binder shadows any outer renaming of the same index
        // avoid capture: if some renaming target equals the binder, rename the binder
        bool capture = false;
        auto fv = free_vars(e->body);
        for (auto [from, to] : inner)
            if (to == binder && fv.count(from)) capture = true;
        if (capture) {
            int fresh = binder;
            auto used = all_vars(e->body);
            for (auto [from, to] : inner) {
                (void)from;
                used.insert(to);
            }
            while (used.count(fresh)) ++fresh;
            inner[binder] = fresh;
            binder = fresh;
        }
        auto body = subst_rec(e->body, inner);
        return e->kind == ExprKind::SumAgg ? sum_agg(binder, body)
                                           : uncond_agg(e->name, binder, body);
    }
    case ExprKind::GuardedAgg: {
        int gf = map_var(m, e->guard_free);
        int binder = e->var;
        std::map<int, int> inner = m;
        inner.erase(binder);
        bool capture = false;
        auto fv = free_vars(e->body);
        for (auto [from, to] : inner)
            if (to == binder && fv.count(from)) capture = true;
        if (capture) {
            int fresh = binder;
            auto used = all_vars(e->body);
            used.insert(gf);
            for (auto [from, to] : inner) {
                (void)from;
                used.insert(to);
            }
            while (used.count(fresh)) ++fresh;
            inner[binder] = fresh;
            binder = fresh;
        }
        auto body = subst_rec(e->body, inner);
        return guarded_agg(e->name, gf, binder, body);
    }
    }
    throw Error("subst: unknown node");
}

} // namespace

ExprPtr subst_free_vars(const ExprPtr& e, const std::map<int, int>& rename) {
    if (rename.empty()) return e;
    return subst_rec(e, rename);
}

namespace {

ExprPtr rename_rec(const ExprPtr& e, const std::map<int, int>& perm) {
    auto m = [&](int v) { return map_var(perm, v); };
    switch (e->kind) {
    case ExprKind::EqPred:
        return eq_pred(m(e->i), m(e->j), e->neq);
    case ExprKind::EdgePred:
        return edge_pred(m(e->i), m(e->j));
    case ExprKind::LabelPred:
        return label_pred(e->s, m(e->i));
    case ExprKind::One:
        return e;
    case ExprKind::Product:
        return product(rename_rec(e->lhs, perm), rename_rec(e->rhs, perm));
    case ExprKind::Add:
        return add(rename_rec(e->lhs, perm), rename_rec(e->rhs, perm));
    case ExprKind::Scale:
        return scale(e->a, rename_rec(e->body, perm));
    case ExprKind::Apply: {
        std::vector<ExprPtr> args;
        for (const auto& a : e->args) args.push_back(rename_rec(a, perm));
        return apply(e->name, std::move(args));
    }
    case ExprKind::SumAgg:
        return sum_agg(m(e->var), rename_rec(e->body, perm));
    case ExprKind::UncondAgg:
        return uncond_agg(e->name, m(e->var), rename_rec(e->body, perm));
    case ExprKind::GuardedAgg:
        return guarded_agg(e->name, m(e->guard_free), m(e->var), rename_rec(e->body, perm));
    }
    throw Error("rename: unknown node");
}

} // namespace

ExprPtr rename_all_vars(const ExprPtr& e, const std::map<int, int>& perm) {
    std::set<int> targets;
    for (auto [from, to] : perm) {
        (void)from;
        if (!targets.insert(to).second) throw Error("rename_all_vars: non-injective renaming");
    }
    return rename_rec(e, perm);
}

ExprPtr swap_vars(const ExprPtr& e, int a, int b) {
    if (a == b) return e;
    return rename_rec(e, {{a, b}, {b, a}});
}

} // namespace tl
