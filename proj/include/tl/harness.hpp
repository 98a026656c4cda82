#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tl/evaluate.hpp"
#include "tl/expr.hpp"
#include "tl/graph.hpp"

namespace tl {

// Partition of (graph, vertex) items (arity 1) or graphs (arity 0) into
// classes with dense ids.
struct Partition {
    int arity = 1;
    std::vector<std::pair<int, int>> items; // (graph index, vertex); vertex -1 for arity 0
    std::vector<int> class_of;              // per item
    int num_classes = 0;

    bool same_items(const Partition& o) const { return arity == o.arity && items == o.items; }
    bool operator==(const Partition& o) const;
};

// Two items share a class iff every expression evaluates equal on them.
// Exact mode compares exactly; float mode groups values within 1e-9 by
// transitive closure. All corpus graphs must have equal size.
Partition induced_partition(const std::vector<ExprPtr>& exprs, const std::vector<Graph>& corpus,
                            int arity, EvalMode mode, const EvalContext& ctx = {});

// Classes by interned refinement label at round t (vertex labels for
// arity 1, graph labels for arity 0). algo "cr" or "wl".
Partition wl_partition(const std::vector<Graph>& corpus, const std::string& algo, int k, int t,
                       int arity);

// Every class of p contained in a class of q.
bool refines(const Partition& p, const Partition& q);

// Grammar-directed sampling of function-free expressions with rational
// coefficients in {-2,-1,-1/2,1/2,1,2}; var_count <= k_vars, sum_depth <=
// depth, free variables within {x1} (closed = true forces no free variables),
// and the guarded flag matching `guarded` (which requires k_vars == 2).
ExprPtr random_expr(int k_vars, int depth, bool guarded, std::uint64_t seed, int label_len = 0,
                    bool closed = false);

struct Violation {
    std::string expr;      // offending expression (surface syntax), if any
    std::string item_a, item_b;
    std::string value_a, value_b;
    std::string note;
};

struct CheckReport {
    std::string theorem;
    long long pairs_checked = 0;
    int exprs_sampled = 0;
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Empirically checkable directions of the separation theorems:
//  thm2   : vwl_k^(t)-equal vertex items never separated by random
//           TL_{k+1}^(t) expressions
//  thm3   : (a) cr^(t)-equal items never separated by random guarded
//           depth-t expressions; (b) every cr^(t)-separated pair is
//           separated by its synthesized distinguisher
//  thm4_1 : graph-level CR and 1-WL partitions coincide at round t, and
//           random closed TL_2^(t+1) expressions never separate
//           gcr^(t)-equal graphs
CheckReport check_theorem(const std::string& tag, const std::vector<Graph>& corpus, int k, int t,
                          int n_exprs, std::uint64_t seed);

} // namespace tl
