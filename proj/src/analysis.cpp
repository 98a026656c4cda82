#include "tl/analysis.hpp"

#include <algorithm>
#include <vector>

namespace tl {

namespace {

bool vars_ok(int v) { return v == 1 || v == 2; }

// Union of free variables has at most one element (constants mix freely with
// single-variable components; One carries no variable).
bool shared_single_free(std::initializer_list<const ExprPtr*> parts) {
    std::set<int> u;
    for (const auto* p : parts) {
        auto fv = free_vars(*p);
        u.insert(fv.begin(), fv.end());
    }
    return u.size() <= 1;
}

bool gf2(const ExprPtr& e);

// A guarded summation has the shape sum_{x_j} E(x_i,x_j) * phi(x_j) with the
// guard at the top product level; a bare guard sum_{x_j} E(x_i,x_j) counts.
bool guarded_sum(const ExprPtr& e) {
    int j = e->var;
    if (!vars_ok(j)) return false;
    int i = 3 - j;
    std::vector<ExprPtr> factors;
    ExprPtr cur = e->body;
    while (cur->kind == ExprKind::Product) {
        factors.push_back(cur->rhs);
        cur = cur->lhs;
    }
    factors.push_back(cur);
    std::reverse(factors.begin(), factors.end());
    int guard_at = -1;
    for (std::size_t t = 0; t < factors.size(); ++t) {
        const auto& f = factors[t];
        if (f->kind == ExprKind::EdgePred && ((f->i == i && f->j == j) || (f->i == j && f->j == i))) {
            guard_at = static_cast<int>(t);
            break;
        }
    }
    if (guard_at < 0) return false;
    for (std::size_t t = 0; t < factors.size(); ++t) {
        if (static_cast<int>(t) == guard_at) continue;
        auto fv = free_vars(factors[t]);
        fv.erase(j);
        if (!fv.empty()) return false;
        if (!gf2(factors[t])) return false;
    }
    return true;
}

bool gf2(const ExprPtr& e) {
    switch (e->kind) {
    case ExprKind::One:
        return true;
    case ExprKind::EqPred:
        return e->i == e->j && vars_ok(e->i);
    case ExprKind::EdgePred:
        return false; // only allowed as a summation guard
    case ExprKind::LabelPred:
        return vars_ok(e->i);
    case ExprKind::Product:
    case ExprKind::Add:
        return gf2(e->lhs) && gf2(e->rhs) && shared_single_free({&e->lhs, &e->rhs});
    case ExprKind::Scale:
        return gf2(e->body);
    case ExprKind::Apply: {
        std::set<int> u;
        for (const auto& a : e->args) {
            if (!gf2(a)) return false;
            auto fv = free_vars(a);
            u.insert(fv.begin(), fv.end());
        }
        return u.size() <= 1;
    }
    case ExprKind::SumAgg:
        return guarded_sum(e);
    case ExprKind::UncondAgg:
        return false;
    case ExprKind::GuardedAgg:
        return vars_ok(e->guard_free) && vars_ok(e->var) && e->guard_free != e->var &&
               gf2(e->body);
    }
    return false;
}

} // namespace

bool in_guarded_fragment(const ExprPtr& e) { return gf2(e); }

AnalysisReport analyze(const ExprPtr& e) {
    AnalysisReport r;
    r.free_vars = free_vars(e);
    r.var_count = static_cast<int>(all_vars(e).size());
    r.sum_depth = sum_depth(e);
    r.agg_depth = agg_depth(e);
    r.function_free = function_free(e);
    bool free_ok = r.free_vars.empty() || (r.free_vars.size() == 1 && *r.free_vars.begin() == 1);
    r.guarded = free_ok && in_guarded_fragment(e);
    return r;
}

} // namespace tl
