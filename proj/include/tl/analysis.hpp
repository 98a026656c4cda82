#pragma once

#include <set>

#include "tl/expr.hpp"

namespace tl {

struct AnalysisReport {
    std::set<int> free_vars;
    int var_count = 0; // distinct variable indices used anywhere
    int sum_depth = 0;
    int agg_depth = 0;
    bool guarded = false;       // lies in the guarded two-variable fragment
    bool function_free = false;
};

AnalysisReport analyze(const ExprPtr& e);

// Syntactic membership in the guarded two-variable fragment, ignoring the
// top-level free-variable restriction (analyze additionally requires
// free_vars within {x1}).
bool in_guarded_fragment(const ExprPtr& e);

} // namespace tl
