#pragma once

#include <string_view>

#include "degenlag/chart.hpp"
#include "degenlag/expr.hpp"

namespace degenlag {

/// Parses an arithmetic expression over the coordinates of `chart`.
///
/// Grammar (whitespace insignificant):
///
///     expr     := term (('+' | '-') term)*
///     term     := unary (('*' | '/') unary)*
///     unary    := ('-' | '+') unary | power
///     power    := primary ('^' exponent)*
///     exponent := ['-' | '+'] primary          (must fold to an integer constant)
///     primary  := number | name | func '(' expr ')' | '(' expr ')'
///     func     := sin | cos | exp | log | sqrt
///     number   := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]
///
/// Binary operators are left-associative. Decimal literals are stored exactly.
/// Throws ParseError (with 0-based offset) or UnknownIdentifier.
Expr parse_expr(std::string_view src, const Chart& chart);

}  // namespace degenlag
