#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "adeglab/boolfn.hpp"

namespace adeglab {

/// Parsed function expression.
///
///   expr    := unary ('o' operand)*          right-associative
///   operand := unary | '(' expr (',' expr)+ ')'
///   unary   := '~' unary | postfix
///   postfix := primary ('^' INT | '[' xI '=' BIT (',' xI '=' BIT)* ']')*
///   primary := NAME INT | 'tt:' INT ':0x' HEX | '(' expr ')'
///
/// NAME is one of AND, OR, MAJ, XOR, PARITY, NOT, ID (any case).
struct FunctionExpr {
  enum class Kind { Builtin, Literal, Compose, Power, Restrict, Negate };

  Kind kind = Kind::Builtin;
  /// Builtin tag (upper case) or the literal text.
  std::string name;
  /// Arity of the node's function.
  int arity = 0;
  /// For Compose: children[0] is the outer function, the rest the inner
  /// list (one entry means the same g under every input).
  std::vector<std::shared_ptr<const FunctionExpr>> children;
  int exponent = 0;
  Assignment assignment;
  /// Byte offset of the node in the source text.
  std::size_t position = 0;

  friend bool operator==(const FunctionExpr& a, const FunctionExpr& b);
};

/// Throws ParseError for syntax and arity errors.
FunctionExpr parse_function_expr(std::string_view text);
/// Canonical text; parse_function_expr(print_function_expr(e)) == e up to positions.
std::string print_function_expr(const FunctionExpr& e);
BooleanFunction evaluate_expr(const FunctionExpr& e);
/// parse + evaluate.
BooleanFunction function_from_expr(std::string_view text);

}  // namespace adeglab
