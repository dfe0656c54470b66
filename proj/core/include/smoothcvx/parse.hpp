#pragma once

#include <string_view>

#include "smoothcvx/domain.hpp"
#include "smoothcvx/expr.hpp"

namespace smoothcvx {

/// Parses and certifies an expression:
///
///   expr := term { "+" term }
///   term := [ NONNEG "*" ] atom
///   atom := "affine(" vec ";" NUM ")" | "abs(" vec ";" NUM ")" | "norm()" | "sqnorm()"
///         | "max(" expr "," expr ")" | "pow(" expr "," NUM ")" | "exp(" expr ")"
///         | "softplus(" vec ";" NUM ")" | "recip1m(" expr ")"
///   vec  := NUM { "," NUM }
///
/// Whitespace is insignificant. Throws ParseError (with byte offset),
/// ConvexityError or DomainError.
ConvexExpr parse_expr(std::string_view text, const Domain& domain);

}  // namespace smoothcvx
