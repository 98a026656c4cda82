#include "tl/evaluate.hpp"

#include <string>

#include "tl/error.hpp"

namespace tl {

void Valuation::bind(int var, int vertex) {
    if (var < 1) throw Error("valuation: variable index must be >= 1");
    if (static_cast<int>(slots_.size()) < var) slots_.resize(var, -1);
    slots_[var - 1] = vertex;
}

void Valuation::unbind(int var, int previous) {
    if (var >= 1 && var <= static_cast<int>(slots_.size())) slots_[var - 1] = previous;
}

int Valuation::lookup(int var) const {
    if (var < 1 || var > static_cast<int>(slots_.size())) return -1;
    return slots_[var - 1];
}

Valuation Valuation::permuted(const std::vector<int>& sigma) const {
    Valuation out;
    for (int var = 1; var <= static_cast<int>(slots_.size()); ++var) {
        int v = lookup(var);
        if (v >= 0) out.bind(var, sigma[v]);
    }
    return out;
}

namespace {

const FunctionRegistry& fns(const EvalContext& ctx) {
    static const FunctionRegistry builtin = FunctionRegistry::builtins();
    return ctx.functions ? *ctx.functions : builtin;
}

const AggregationRegistry& aggs(const EvalContext& ctx) {
    static const AggregationRegistry builtin = AggregationRegistry::builtins();
    return ctx.aggregations ? *ctx.aggregations : builtin;
}

int need(const Valuation& nu, int var) {
    int v = nu.lookup(var);
    if (v < 0) throw Error("unbound free variable x" + std::to_string(var));
    return v;
}

const Rational& label_entry(const Graph& g, int v, int s) {
    if (s < 1 || s > g.label_len())
        throw Error("label index P" + std::to_string(s) + " out of range (graph has " +
                    std::to_string(g.label_len()) + " label dimensions)");
    return g.label(v)[s - 1];
}

template <typename T> struct Semantics;

template <> struct Semantics<Rational> {
    static constexpr EvalMode mode = EvalMode::Exact;
    static Rational from_label(const Rational& r) { return r; }
    static Rational from_int(int v) { return Rational(v); }
    static Rational scale(const Rational& a, const Rational& x) { return a * x; }
    static Rational apply_fn(const FunctionRegistry::Fn& fn, const std::string& name,
                             std::span<const Rational> args) {
        if (!fn.fexact)
            throw Error("function '" + name + "' has no exact form (use float mode)");
        return fn.fexact(args);
    }
    static Rational aggregate(const AggregationRegistry::Agg& agg, const std::string& name,
                              std::span<const Rational> xs) {
        if (!agg.fexact)
            throw Error("aggregation '" + name + "' has no exact form (use float mode)");
        return agg.fexact(xs);
    }
};

template <> struct Semantics<double> {
    static constexpr EvalMode mode = EvalMode::Float;
    static double from_label(const Rational& r) { return r.to_double(); }
    static double from_int(int v) { return v; }
    static double scale(const Rational& a, double x) { return a.to_double() * x; }
    static double apply_fn(const FunctionRegistry::Fn& fn, const std::string&,
                           std::span<const double> args) {
        return fn.fnum(args);
    }
    static double aggregate(const AggregationRegistry::Agg& agg, const std::string&,
                            std::span<const double> xs) {
        return agg.fnum(xs);
    }
};

template <typename T>
T eval_rec(const ExprPtr& e, const Graph& g, Valuation& nu, const EvalContext& ctx) {
    using S = Semantics<T>;
    switch (e->kind) {
    case ExprKind::One:
        return S::from_int(1);
    case ExprKind::EqPred: {
        int a = need(nu, e->i), b = need(nu, e->j);
        bool eq = a == b;
        return S::from_int((e->neq ? !eq : eq) ? 1 : 0);
    }
    case ExprKind::EdgePred: {
        int a = need(nu, e->i), b = need(nu, e->j);
        return S::from_int(g.adjacent(a, b) ? 1 : 0);
    }
    case ExprKind::LabelPred:
        return S::from_label(label_entry(g, need(nu, e->i), e->s));
    case ExprKind::Product:
        return eval_rec<T>(e->lhs, g, nu, ctx) * eval_rec<T>(e->rhs, g, nu, ctx);
    case ExprKind::Add:
        return eval_rec<T>(e->lhs, g, nu, ctx) + eval_rec<T>(e->rhs, g, nu, ctx);
    case ExprKind::Scale:
        return S::scale(e->a, eval_rec<T>(e->body, g, nu, ctx));
    case ExprKind::Apply: {
        const auto& fn = fns(ctx).get(e->name);
        if (fn.arity >= 0 && fn.arity != static_cast<int>(e->args.size()))
            throw Error("function '" + e->name + "' expects " + std::to_string(fn.arity) +
                        " arguments, got " + std::to_string(e->args.size()));
        std::vector<T> args;
        args.reserve(e->args.size());
        for (const auto& a : e->args) args.push_back(eval_rec<T>(a, g, nu, ctx));
        return S::apply_fn(fn, e->name, args);
    }
    case ExprKind::SumAgg: {
        T acc = S::from_int(0);
        int saved = nu.saved(e->var);
        for (int v = 0; v < g.n(); ++v) {
            nu.bind(e->var, v);
            acc = acc + eval_rec<T>(e->body, g, nu, ctx);
        }
        nu.unbind(e->var, saved);
        return acc;
    }
    case ExprKind::UncondAgg: {
        const auto& agg = aggs(ctx).get(e->name);
        std::vector<T> xs;
        xs.reserve(g.n());
        int saved = nu.saved(e->var);
        for (int v = 0; v < g.n(); ++v) {
            nu.bind(e->var, v);
            xs.push_back(eval_rec<T>(e->body, g, nu, ctx));
        }
        nu.unbind(e->var, saved);
        if (xs.empty() && !agg.empty_ok)
            throw Error("aggregation '" + e->name + "' over empty multiset");
        return S::aggregate(agg, e->name, xs);
    }
    case ExprKind::GuardedAgg: {
        const auto& agg = aggs(ctx).get(e->name);
        int anchor = need(nu, e->guard_free);
        std::vector<T> xs;
        int saved = nu.saved(e->var);
        for (int v : g.neighbors(anchor)) {
            nu.bind(e->var, v);
            xs.push_back(eval_rec<T>(e->body, g, nu, ctx));
        }
        nu.unbind(e->var, saved);
        if (xs.empty() && !agg.empty_ok)
            throw Error("aggregation '" + e->name + "' over empty neighbor multiset");
        return S::aggregate(agg, e->name, xs);
    }
    }
    throw Error("evaluate: unknown node");
}

} // namespace

Rational evaluate_exact(const ExprPtr& e, const Graph& g, const Valuation& nu,
                        const EvalContext& ctx) {
    Valuation scratch = nu;
    return eval_rec<Rational>(e, g, scratch, ctx);
}

double evaluate_float(const ExprPtr& e, const Graph& g, const Valuation& nu,
                      const EvalContext& ctx) {
    Valuation scratch = nu;
    return eval_rec<double>(e, g, scratch, ctx);
}

Value evaluate(const ExprPtr& e, const Graph& g, const Valuation& nu, EvalMode mode,
               const EvalContext& ctx) {
    if (mode == EvalMode::Exact) return Value::exact(evaluate_exact(e, g, nu, ctx));
    return Value::real(evaluate_float(e, g, nu, ctx));
}

const std::vector<int>& ExactEvalCache::free_list(const ExprPtr& e) {
    auto it = free_of_.find(e.get());
    if (it != free_of_.end()) return it->second;
    auto fv = free_vars(e);
    return free_of_.emplace(e.get(), std::vector<int>(fv.begin(), fv.end())).first->second;
}

Rational ExactEvalCache::eval_rec(const ExprPtr& e, Valuation& nu) {
    const std::vector<int>& fv = free_list(e);
    const bool cacheable = fv.size() <= 2;
    std::tuple<const Expr*, int, int> key{e.get(), -1, -1};
    if (cacheable) {
        if (fv.size() > 0) std::get<1>(key) = nu.lookup(fv[0]);
        if (fv.size() > 1) std::get<2>(key) = nu.lookup(fv[1]);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    Rational val;
    switch (e->kind) {
    case ExprKind::Product:
        val = eval_rec(e->lhs, nu) * eval_rec(e->rhs, nu);
        break;
    case ExprKind::Add:
        val = eval_rec(e->lhs, nu) + eval_rec(e->rhs, nu);
        break;
    case ExprKind::Scale:
        val = e->a * eval_rec(e->body, nu);
        break;
    case ExprKind::SumAgg: {
        Rational acc(0);
        int saved = nu.saved(e->var);
        for (int v = 0; v < g_.n(); ++v) {
            nu.bind(e->var, v);
            acc += eval_rec(e->body, nu);
        }
        nu.unbind(e->var, saved);
        val = acc;
        break;
    }
    default:
        // leaves, applications and general aggregations go through the oracle path
        val = evaluate_exact(e, g_, nu, ctx_);
        break;
    }
    if (cacheable) cache_.emplace(key, val);
    return val;
}

Rational ExactEvalCache::eval(const ExprPtr& e, const Valuation& nu) {
    Valuation scratch = nu;
    return eval_rec(e, scratch);
}

std::vector<std::vector<Value>> evaluate_bundle(const std::vector<ExprPtr>& exprs, const Graph& g,
                                                const std::vector<std::vector<int>>& tuples,
                                                EvalMode mode, const EvalContext& ctx) {
    if (tuples.empty()) return {};
    std::size_t arity = tuples[0].size();
    for (const auto& t : tuples)
        if (t.size() != arity) throw Error("evaluate_bundle: tuples of mixed arity");
    for (const auto& e : exprs) {
        for (int v : free_vars(e))
            if (v > static_cast<int>(arity))
                throw Error("evaluate_bundle: expression uses free variable x" +
                            std::to_string(v) + " beyond tuple arity " + std::to_string(arity));
    }
    std::vector<std::vector<Value>> table;
    table.reserve(tuples.size());
    for (const auto& t : tuples) {
        Valuation nu = Valuation::for_tuple(t);
        std::vector<Value> row;
        row.reserve(exprs.size());
        for (const auto& e : exprs) row.push_back(evaluate(e, g, nu, mode, ctx));
        table.push_back(std::move(row));
    }
    return table;
}

} // namespace tl
