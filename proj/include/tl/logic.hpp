#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "tl/evaluate.hpp"
#include "tl/expr.hpp"
#include "tl/graph.hpp"
#include "tl/rational.hpp"

namespace tl {

enum class FormulaKind {
    VarEq,       // x_i = x_j
    Edge,        // E(x_i, x_j)
    Label,       // P_s(x_i): label entry s equals 1
    LabelEq,     // P_{s,r}(x_i): label entry s equals the real r
    Not,
    And,
    CountExists, // at_least: exists^{>=m} x; exactly: exists^{=m} x
};

enum class CountKind { AtLeast, Exactly };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FormulaKind kind;
    int i = 0, j = 0;
    int s = 0;
    Rational r;
    int m = 0;
    int var = 0;
    CountKind count_kind = CountKind::AtLeast;
    FormulaPtr lhs, rhs; // And
    FormulaPtr body;     // Not/CountExists
};

FormulaPtr f_var_eq(int i, int j);
FormulaPtr f_edge(int i, int j);
FormulaPtr f_label(int s, int i);
FormulaPtr f_label_eq(int s, Rational r, int i);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(FormulaPtr l, FormulaPtr r);
FormulaPtr f_count_exists(int m, int var, FormulaPtr body, CountKind kind = CountKind::AtLeast);

std::set<int> formula_free_vars(const FormulaPtr& f);
int quantifier_rank(const FormulaPtr& f);

bool eval_formula(const FormulaPtr& f, const Graph& g, const Valuation& nu);

// Exact coefficients a_0..a_d of a polynomial through the nodes {0..n}:
// at_least m: 0 below m, 1 from m; exactly m: 1 only at m.
struct Polynomial {
    std::vector<Rational> coeffs; // a_0 first
    Rational eval(const Rational& x) const;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

Polynomial interpolation_poly(int m, int n, CountKind kind);

// Known label values per position, used to translate LabelEq tests on
// real-valued labels via the finite interpolation product.
using LabelValueSets = std::map<int, std::set<Rational>>;

// Logic-to-TL translation for graphs of the fixed size n: formula true
// implies the expression evaluates to 1, false implies 0; quantifier rank
// maps to summation depth; guarded formulas yield guarded expressions.
ExprPtr hat_translate(const FormulaPtr& f, int n, const LabelValueSets& label_values = {});

// Guarded expression separating (g, v) from (h, w) whenever their round-t
// color-refinement labels differ; nullopt when the labels agree.
std::optional<ExprPtr> synthesize_cr_distinguisher(const Graph& g, int v, const Graph& h, int w,
                                                   int t);

// The round-t color characterization formula of (g, v): true at (k, u)
// exactly when u's round-t refinement color in k equals v's in g.
FormulaPtr cr_color_formula(const Graph& g, int v, const Graph& h, int t);

} // namespace tl
