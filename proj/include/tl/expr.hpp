#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tl/rational.hpp"

namespace tl {

enum class ExprKind {
    EqPred,     // 1_{x_i op x_j}, op in {=, !=}
    EdgePred,   // E(x_i, x_j)
    LabelPred,  // P_s(x_i)
    One,        // constant 1 literal
    Product,
    Add,
    Scale,      // a * e, a exact rational
    Apply,      // f(e_1, ..., e_p)
    SumAgg,     // sum_{x_var} body
    UncondAgg,  // aggr^F_{x_var}(body)
    GuardedAgg, // aggr^F_{x_var}(body(x_var) | E(x_guard_free, x_var))
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable tree; unused fields stay defaulted per kind.
struct Expr {
    ExprKind kind;
    int i = 0, j = 0;    // EqPred/EdgePred variable indices; LabelPred variable in i
    int s = 0;           // LabelPred position (1-based)
    bool neq = false;    // EqPred operator
    Rational a;          // Scale coefficient
    std::string name;    // Apply function / aggregation name
    int var = 0;         // binder variable (SumAgg/UncondAgg/GuardedAgg bound var)
    int guard_free = 0;  // GuardedAgg free variable
    ExprPtr lhs, rhs;    // Product/Add
    ExprPtr body;        // Scale/SumAgg/UncondAgg/GuardedAgg
    std::vector<ExprPtr> args; // Apply
};

ExprPtr eq_pred(int i, int j, bool neq = false);
ExprPtr edge_pred(int i, int j);
ExprPtr label_pred(int s, int i);
ExprPtr one();
ExprPtr product(ExprPtr l, ExprPtr r);
ExprPtr add(ExprPtr l, ExprPtr r);
// a - b is sugar for a + (-1) * b
ExprPtr sub(ExprPtr l, ExprPtr r);
ExprPtr scale(Rational a, ExprPtr e);
ExprPtr apply(std::string name, std::vector<ExprPtr> args);
ExprPtr sum_agg(int var, ExprPtr body);
ExprPtr uncond_agg(std::string agg, int var, ExprPtr body);
// Enforces free(body) subseteq {bound}.
ExprPtr guarded_agg(std::string agg, int guard_free, int bound, ExprPtr body);

// Product/sum over a list; empty product is One, empty sum violates use sites.
ExprPtr product_fold(const std::vector<ExprPtr>& factors);
ExprPtr add_fold(const std::vector<ExprPtr>& terms);

bool structural_equal(const ExprPtr& a, const ExprPtr& b);

std::set<int> free_vars(const ExprPtr& e);
std::set<int> all_vars(const ExprPtr& e); // every index used, free or bound
int sum_depth(const ExprPtr& e);
int agg_depth(const ExprPtr& e);
bool function_free(const ExprPtr& e);

// Capture-avoiding renaming of free variable occurrences. Binders that would
// capture a substitution target are alpha-renamed to fresh indices.
ExprPtr subst_free_vars(const ExprPtr& e, const std::map<int, int>& rename);

// Bijective renaming of every variable occurrence, binders included; keeps
// the total variable budget intact (the alternating-variable idiom of the
// two-variable fragment). `perm` must be injective; unmapped indices stay.
ExprPtr rename_all_vars(const ExprPtr& e, const std::map<int, int>& perm);
ExprPtr swap_vars(const ExprPtr& e, int a, int b);

} // namespace tl
