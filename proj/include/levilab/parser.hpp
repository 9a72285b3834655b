#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "levilab/expr.hpp"

namespace levilab {

/// Names visible to an expression: z1..zn and zb1..zbn, declared real
/// parameters, and named real constants substituted at parse time.
struct ParseContext {
    int n = 0;
    std::vector<std::string> params;
    std::map<std::string, double> constants;
    int line = 0;  // reported in errors when nonzero

    VarNames names() const { return VarNames{params}; }
};

/// Grammar: + - * / ^ (integer exponent), unary minus, parentheses,
/// decimal literals, i, pi, and sin cos exp log conj re im abs2.
/// '#' starts a comment running to end of line.
Expr parse_expr(std::string_view text, const ParseContext& context);

/// True when `name` is reserved by the grammar (function names, i, pi,
/// z<digits>, zb<digits>).
bool is_reserved_name(std::string_view name);

}  // namespace levilab
