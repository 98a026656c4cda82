#include "tl/logic.hpp"

#include <algorithm>

#include "tl/error.hpp"
#include "tl/wl.hpp"

namespace tl {

namespace {

std::shared_ptr<Formula> fnode(FormulaKind k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
}

} // namespace

FormulaPtr f_var_eq(int i, int j) {
    auto f = fnode(FormulaKind::VarEq);
    f->i = i;
    f->j = j;
    return f;
}

FormulaPtr f_edge(int i, int j) {
    auto f = fnode(FormulaKind::Edge);
    f->i = i;
    f->j = j;
    return f;
}

FormulaPtr f_label(int s, int i) {
    auto f = fnode(FormulaKind::Label);
    f->s = s;
    f->i = i;
    return f;
}

FormulaPtr f_label_eq(int s, Rational r, int i) {
    auto f = fnode(FormulaKind::LabelEq);
    f->s = s;
    f->r = std::move(r);
    f->i = i;
    return f;
}

FormulaPtr f_not(FormulaPtr inner) {
    auto f = fnode(FormulaKind::Not);
    f->body = std::move(inner);
    return f;
}

FormulaPtr f_and(FormulaPtr l, FormulaPtr r) {
    auto f = fnode(FormulaKind::And);
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    return f;
}

FormulaPtr f_count_exists(int m, int var, FormulaPtr body, CountKind kind) {
    if (m < 0) throw Error("counting quantifier threshold must be >= 0");
    auto f = fnode(FormulaKind::CountExists);
    f->m = m;
    f->var = var;
    f->body = std::move(body);
    f->count_kind = kind;
    return f;
}

std::set<int> formula_free_vars(const FormulaPtr& f) {
    switch (f->kind) {
    case FormulaKind::VarEq:
    case FormulaKind::Edge:
        return {f->i, f->j};
    case FormulaKind::Label:
    case FormulaKind::LabelEq:
        return {f->i};
    case FormulaKind::Not:
        return formula_free_vars(f->body);
    case FormulaKind::And: {
        auto l = formula_free_vars(f->lhs);
        auto r = formula_free_vars(f->rhs);
        l.insert(r.begin(), r.end());
        return l;
    }
    case FormulaKind::CountExists: {
        auto b = formula_free_vars(f->body);
        b.erase(f->var);
        return b;
    }
    }
    return {};
}

int quantifier_rank(const FormulaPtr& f) {
    switch (f->kind) {
    case FormulaKind::VarEq:
    case FormulaKind::Edge:
    case FormulaKind::Label:
    case FormulaKind::LabelEq:
        return 0;
    case FormulaKind::Not:
        return quantifier_rank(f->body);
    case FormulaKind::And:
        return std::max(quantifier_rank(f->lhs), quantifier_rank(f->rhs));
    case FormulaKind::CountExists:
        return quantifier_rank(f->body) + 1;
    }
    return 0;
}

namespace {

bool eval_rec(const FormulaPtr& f, const Graph& g, Valuation& nu) {
    switch (f->kind) {
    case FormulaKind::VarEq: {
        int a = nu.lookup(f->i), b = nu.lookup(f->j);
        if (a < 0 || b < 0) throw Error("eval_formula: unbound variable");
        return a == b;
    }
    case FormulaKind::Edge: {
        int a = nu.lookup(f->i), b = nu.lookup(f->j);
        if (a < 0 || b < 0) throw Error("eval_formula: unbound variable");
        return g.adjacent(a, b);
    }
    case FormulaKind::Label: {
        int a = nu.lookup(f->i);
        if (a < 0) throw Error("eval_formula: unbound variable");
        if (f->s < 1 || f->s > g.label_len()) throw Error("eval_formula: label index out of range");
        return g.label(a)[f->s - 1] == Rational(1);
    }
    case FormulaKind::LabelEq: {
        int a = nu.lookup(f->i);
        if (a < 0) throw Error("eval_formula: unbound variable");
        if (f->s < 1 || f->s > g.label_len()) throw Error("eval_formula: label index out of range");
        return g.label(a)[f->s - 1] == f->r;
    }
    case FormulaKind::Not:
        return !eval_rec(f->body, g, nu);
    case FormulaKind::And:
        return eval_rec(f->lhs, g, nu) && eval_rec(f->rhs, g, nu);
    case FormulaKind::CountExists: {
        int count = 0;
        int saved = nu.saved(f->var);
        for (int v = 0; v < g.n(); ++v) {
            nu.bind(f->var, v);
            if (eval_rec(f->body, g, nu)) ++count;
        }
        nu.unbind(f->var, saved);
        return f->count_kind == CountKind::AtLeast ? count >= f->m : count == f->m;
    }
    }
    throw Error("eval_formula: unknown node");
}

} // namespace

bool eval_formula(const FormulaPtr& f, const Graph& g, const Valuation& nu) {
    Valuation scratch = nu;
    return eval_rec(f, g, scratch);
}

Rational Polynomial::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial interpolation_poly(int m, int n, CountKind kind) {
    if (m < 0 || m > n) throw Error("interpolation threshold out of range (0 <= m <= n)");
    // Lagrange basis accumulation through the nodes {0..n}
    std::vector<Rational> acc(static_cast<std::size_t>(n) + 1, Rational(0));
    for (int t = 0; t <= n; ++t) {
        bool y = kind == CountKind::AtLeast ? t >= m : t == m;
        if (!y) continue;
        std::vector<Rational> basis = {Rational(1)}; // product of (x - j)
        Rational denom(1);
        for (int j = 0; j <= n; ++j) {
            if (j == t) continue;
            std::vector<Rational> next(basis.size() + 1, Rational(0));
            for (std::size_t d = 0; d < basis.size(); ++d) {
                next[d] += basis[d] * Rational(-j);
                next[d + 1] += basis[d];
            }
            basis = std::move(next);
            denom *= Rational(t - j);
        }
        for (std::size_t d = 0; d < basis.size(); ++d) acc[d] += basis[d] / denom;
    }
    while (acc.size() > 1 && acc.back().is_zero()) acc.pop_back();
    return Polynomial{std::move(acc)};
}

namespace {

ExprPtr power_of(const ExprPtr& base, int j) {
    std::vector<ExprPtr> copies(static_cast<std::size_t>(j), base);
    return product_fold(copies);
}

ExprPtr hat_rec(const FormulaPtr& f, int n, const LabelValueSets& labels,
                std::map<const Formula*, ExprPtr>& memo) {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    ExprPtr out;
    switch (f->kind) {
    case FormulaKind::VarEq:
        out = eq_pred(f->i, f->j);
        break;
    case FormulaKind::Edge:
        out = edge_pred(f->i, f->j);
        break;
    case FormulaKind::Label:
        out = label_pred(f->s, f->i);
        break;
    case FormulaKind::LabelEq: {
        auto sit = labels.find(f->s);
        if (sit == labels.end())
            throw Error("hat_translate: no label value set for position " + std::to_string(f->s));
        const auto& values = sit->second;
        if (!values.count(f->r))
            throw Error("hat_translate: tested label value missing from the value set");
        std::vector<ExprPtr> factors;
        Rational denom(1);
        for (const auto& other : values) {
            if (other == f->r) continue;
            factors.push_back(add(label_pred(f->s, f->i), scale(-other, one())));
            denom *= f->r - other;
        }
        if (factors.empty())
            out = one(); // a single possible value is always matched
        else
            out = scale(Rational(1) / denom, product_fold(factors));
        break;
    }
    case FormulaKind::Not:
        // 1_{x=x} - hat(f), spelled with the One constant
        out = add(one(), scale(Rational(-1), hat_rec(f->body, n, labels, memo)));
        break;
    case FormulaKind::And:
        out = product(hat_rec(f->lhs, n, labels, memo), hat_rec(f->rhs, n, labels, memo));
        break;
    case FormulaKind::CountExists: {
        ExprPtr inner = sum_agg(f->var, hat_rec(f->body, n, labels, memo));
        if (f->m > n) { // counts never exceed n: identically false at this size
            out = scale(Rational(0), inner);
            break;
        }
        Polynomial p = interpolation_poly(f->m, n, f->count_kind);
        std::vector<ExprPtr> terms;
        for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
            if (p.coeffs[j].is_zero()) continue;
            if (j == 0)
                terms.push_back(scale(p.coeffs[0], one()));
            else
                terms.push_back(scale(p.coeffs[j], power_of(inner, static_cast<int>(j))));
        }
        if (p.degree() < 1) // constant polynomial: keep the quantifier depth in sync
            terms.push_back(scale(Rational(0), inner));
        out = add_fold(terms);
        break;
    }
    }
    if (!out) throw Error("hat_translate: unknown node");
    memo.emplace(f.get(), out);
    return out;
}

} // namespace

ExprPtr hat_translate(const FormulaPtr& f, int n, const LabelValueSets& label_values) {
    if (n < 1) throw Error("hat_translate requires a positive graph size");
    std::map<const Formula*, ExprPtr> memo;
    return hat_rec(f, n, label_values, memo);
}

namespace {

struct ColorRep {
    const Graph* graph;
    int vertex;
};

// Formula characterizing the round-r refinement color, with free variable
// `var`; quantified variables alternate between 1 and 2. One formula per
// (round, color, var) is memoized and shared.
class CrFormulaBuilder {
public:
    CrFormulaBuilder(const Graph& g, const Graph& h, int t)
        : g_(g), h_(h), tg_(color_refinement(g, t)), th_(color_refinement(h, t)) {
        for (int r = 0; r <= t; ++r) {
            for (int v = 0; v < g.n(); ++v) reps_[{r, tg_.label_at(v, r)}] = {&g_, v};
            for (int w = 0; w < h.n(); ++w) reps_.try_emplace({r, th_.label_at(w, r)}, ColorRep{&h_, w});
        }
    }

    int color_of_g(int v, int r) { return tg_.label_at(v, r); }
    int color_of_h(int w, int r) { return th_.label_at(w, r); }

    FormulaPtr build(int round, int color, int var) {
        auto key = std::tuple<int, int, int>(round, color, var);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        const ColorRep rep = reps_.at({round, color});
        const Graph& g = *rep.graph;
        RefinementTrace& tr = rep.graph == &g_ ? tg_ : th_;
        FormulaPtr out;
        if (round == 0) {
            out = f_var_eq(var, var); // shared initial color when unlabeled
            for (int s = 1; s <= g.label_len(); ++s)
                out = f_and(out, f_label_eq(s, g.label(rep.vertex)[s - 1], var));
        } else {
            int other = var == 1 ? 2 : 1;
            out = build(round - 1, tr.label_at(rep.vertex, round - 1), var);
            // exact neighbor count pins the whole multiset together with the
            // per-color exact counts below
            int deg = g.degree(rep.vertex);
            out = f_and(out, f_count_exists(deg, other,
                                            f_and(f_edge(var, other), f_var_eq(other, other)),
                                            CountKind::Exactly));
            std::map<int, int> child_counts;
            for (int u : g.neighbors(rep.vertex)) ++child_counts[tr.label_at(u, round - 1)];
            for (const auto& [child_color, count] : child_counts) {
                FormulaPtr child = build(round - 1, child_color, other);
                out = f_and(out, f_count_exists(count, other, f_and(f_edge(var, other), child),
                                                CountKind::Exactly));
            }
        }
        memo_.emplace(key, out);
        return out;
    }

    LabelValueSets label_values() const {
        LabelValueSets out;
        for (const Graph* g : {&g_, &h_}) {
            for (int v = 0; v < g->n(); ++v)
                for (int s = 1; s <= g->label_len(); ++s)
                    out[s].insert(g->label(v)[s - 1]);
        }
        return out;
    }

private:
    const Graph& g_;
    const Graph& h_;
    RefinementTrace tg_, th_;
    std::map<std::pair<int, int>, ColorRep> reps_;
    std::map<std::tuple<int, int, int>, FormulaPtr> memo_;
};

} // namespace

FormulaPtr cr_color_formula(const Graph& g, int v, const Graph& h, int t) {
    CrFormulaBuilder builder(g, h, t);
    return builder.build(t, builder.color_of_g(v, t), 1);
}

std::optional<ExprPtr> synthesize_cr_distinguisher(const Graph& g, int v, const Graph& h, int w,
                                                   int t) {
    if (g.n() != h.n())
        throw Error("distinguisher synthesis requires graphs of equal size");
    CrFormulaBuilder builder(g, h, t);
    if (builder.color_of_g(v, t) == builder.color_of_h(w, t)) return std::nullopt;
    FormulaPtr formula = builder.build(t, builder.color_of_g(v, t), 1);
    return hat_translate(formula, g.n(), builder.label_values());
}

} // namespace tl
