#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "tl/expr.hpp"
#include "tl/graph.hpp"
#include "tl/registry.hpp"

namespace tl {

// Partial assignment of variable indices to vertices.
class Valuation {
public:
    Valuation() = default;
    Valuation(std::initializer_list<std::pair<int, int>> binds) {
        for (auto [var, v] : binds) bind(var, v);
    }
    static Valuation for_tuple(std::span<const int> tuple) {
        Valuation nu;
        for (std::size_t i = 0; i < tuple.size(); ++i) nu.bind(static_cast<int>(i) + 1, tuple[i]);
        return nu;
    }

    void bind(int var, int vertex);
    void unbind(int var, int previous); // restore a saved slot (-1 = was unbound)
    int lookup(int var) const;          // -1 when unbound
    int saved(int var) const { return lookup(var); }

    // Apply the permutation sigma to every bound vertex.
    Valuation permuted(const std::vector<int>& sigma) const;

private:
    std::vector<int> slots_; // index by var, -1 = unbound
};

struct EvalContext {
    const FunctionRegistry* functions = nullptr;     // defaults to builtins
    const AggregationRegistry* aggregations = nullptr;
};

Value evaluate(const ExprPtr& e, const Graph& g, const Valuation& nu, EvalMode mode,
               const EvalContext& ctx = {});

Rational evaluate_exact(const ExprPtr& e, const Graph& g, const Valuation& nu,
                        const EvalContext& ctx = {});
double evaluate_float(const ExprPtr& e, const Graph& g, const Valuation& nu,
                      const EvalContext& ctx = {});

// Row per tuple, column per expression. All expressions must have free
// variables within {x1..xs} where s is the tuple arity.
std::vector<std::vector<Value>> evaluate_bundle(const std::vector<ExprPtr>& exprs, const Graph& g,
                                                const std::vector<std::vector<int>>& tuples,
                                                EvalMode mode, const EvalContext& ctx = {});

// Exact evaluation with memoization over shared subtrees, keyed on a node and
// the bindings of its (at most two) free variables. Semantically identical to
// evaluate_exact; the naive evaluator stays the trusted oracle and the two are
// cross-checked in the test suite. One cache serves one graph.
class ExactEvalCache {
public:
    explicit ExactEvalCache(const Graph& g, const EvalContext& ctx = {}) : g_(g), ctx_(ctx) {}
    Rational eval(const ExprPtr& e, const Valuation& nu);

private:
    const Graph& g_;
    EvalContext ctx_;
    std::map<const Expr*, std::vector<int>> free_of_;
    std::map<std::tuple<const Expr*, int, int>, Rational> cache_;
    const std::vector<int>& free_list(const ExprPtr& e);
    Rational eval_rec(const ExprPtr& e, Valuation& nu);
};

} // namespace tl
