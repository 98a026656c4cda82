#pragma once

#include <set>
#include <vector>

#include "tl/expr.hpp"

namespace tl {

// One multiplicative atom of a conjunctive expression. Eq atoms survive only
// between two free variables; Opaque wraps subtrees (function applications,
// general aggregations) that take part in factoring as predicates over their
// free variables.
struct Atom {
    enum class Kind { Edge, Label, Eq, Opaque } kind;
    int i = 0, j = 0; // Edge/Eq variables; Label variable in i
    int s = 0;        // Label position
    ExprPtr opaque;
    std::set<int> vars() const;
    ExprPtr to_expr() const;
    std::string key() const; // deterministic ordering/merging key
};

struct ConjunctiveExpr {
    Rational coeff;
    std::vector<Atom> atoms;
    std::set<int> free_vars;
    std::set<int> bound_vars; // summed variables; each appears in >= 1 atom
};

struct NormalForm {
    std::vector<ConjunctiveExpr> conjuncts; // empty list denotes the zero expression
    std::set<int> free_vars;
};

// How non-conjunctive nodes are treated during normalization.
enum class OpaquePolicy {
    FunctionsOnly,          // Apply -> placeholder atom; aggregations are errors
    FunctionsAndAggregates, // Apply/UncondAgg/GuardedAgg -> opaque atoms
};

// Linear combination of conjunctive expressions equivalent to e. Equalities
// with a summed variable are eliminated by substitution; disequalities expand
// by inclusion-exclusion into two signed conjuncts.
NormalForm normalize(const ExprPtr& e, OpaquePolicy policy = OpaquePolicy::FunctionsOnly);

// Semantics-preserving reconstruction, mainly for testing.
ExprPtr normal_form_to_expr(const NormalForm& nf);

struct Hypergraph {
    std::vector<int> vertices;           // variable indices, sorted
    std::vector<std::vector<int>> edges; // one per atom (multiset)
    std::set<int> distinguished;         // free variables
};

Hypergraph hypergraph_of(const ConjunctiveExpr& c);

enum class ElimStrategy { Exhaustive, MinFill };

struct EliminationOrder {
    std::vector<int> order;  // sigma: distinguished first; eliminate back to front
    std::vector<int> u_sizes; // |U_j| per elimination step, aligned with `order`
    int induced_width = 0;
    bool exact = true; // false when the greedy fallback produced it
};

// Exhaustive search requires <= 10 non-distinguished vertices; ties break to
// the lexicographically smallest order.
EliminationOrder elimination_order(const Hypergraph& h, ElimStrategy strategy);

// Tree of bags derived from an elimination order; width = max bag size - 1.
struct TreeDecomposition {
    std::vector<std::vector<int>> bags;
    std::vector<std::pair<int, int>> tree_edges;
    int width = 0;
};

TreeDecomposition decomposition_from_order(const Hypergraph& h, const EliminationOrder& order);

// Every hyperedge inside some bag; every non-distinguished vertex's bags
// form a connected subtree.
bool valid_decomposition(const Hypergraph& h, const TreeDecomposition& td);

struct TreewidthResult {
    int width = 0;
    bool exact = true;
};

// Max width over the conjuncts of the normal form, recursing through function
// applications via placeholder predicates.
TreewidthResult treewidth(const ExprPtr& e);

// Variable-minimizing rewrite: factor summations along an elimination order
// and reuse variable indices under shadowing. Function applications and
// general aggregations pass through opaquely (their insides rewritten).
ExprPtr rewrite_min_vars(const ExprPtr& e);

struct RewriteReport {
    int width = 0;
    bool exact = true;
    int vars_before = 0;
    int vars_after = 0;
};

ExprPtr rewrite_min_vars(const ExprPtr& e, RewriteReport& report);

// Reduction of one equality-pattern summation term
// sum_{y_1..y_k} psi(x, y) * phi(y) to an expression over x_1..x_k only.
// The input must bind exactly k variables; psi is the product of (dis)equality
// factors, phi the rest (free variables within the bound ones).
ExprPtr reduce_ign_term(const ExprPtr& term, int k);

} // namespace tl
