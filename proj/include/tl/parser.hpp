#pragma once

#include <set>
#include <string>

#include "tl/expr.hpp"

namespace tl {

// Name sets accepted by the parser for @fn(...) and agg @name constructs.
struct ParserNames {
    std::set<std::string> functions;
    std::set<std::string> aggregations;
    static ParserNames builtins();
};

// Grammar:
//   expr     := term (("+"|"-") term)*
//   term     := factor ("*" factor)*
//   factor   := rational | "1" | "E(" var "," var ")" | "P"int "(" var ")"
//             | "[" var ("="|"!=") var "]"
//             | "sum" var ":" expr
//             | "agg" "@"name var (":" | "|" "E(" var "," var ")" ":") expr
//             | "@"name "(" expr ("," expr)* ")" | "(" expr ")"
//   var      := "x"int       rational := int("/"int)? | decimal
// "*" binds tighter than "+"/"-"; sum/agg bodies extend maximally right.
ExprPtr parse(const std::string& text);
ExprPtr parse(const std::string& text, const ParserNames& names);

// parse(render(e)) is structurally equal to e; minimal parentheses.
std::string render(const ExprPtr& e);

} // namespace tl
