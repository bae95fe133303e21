#include <gtest/gtest.h>

#include "adeglab/errors.hpp"
#include "adeglab/expr.hpp"

namespace adeglab {
namespace {

using Kind = FunctionExpr::Kind;

TEST(Expr, PowerExample) {
  const auto e = parse_function_expr("MAJ3^2");
  EXPECT_EQ(e.kind, Kind::Power);
  EXPECT_EQ(e.exponent, 2);
  EXPECT_EQ(e.arity, 9);
  EXPECT_EQ(evaluate_expr(e), power(make_builtin(Builtin::Maj, 3), 2));
}

TEST(Expr, AlternatingTree) {
  const auto e = parse_function_expr("(AND2 o OR2)^2");
  ASSERT_EQ(e.kind, Kind::Power);
  EXPECT_EQ(e.children[0]->kind, Kind::Compose);
  EXPECT_EQ(e.arity, 16);
  const auto and_or = compose(make_builtin(Builtin::And, 2), make_builtin(Builtin::Or, 2));
  EXPECT_EQ(evaluate_expr(e), power(and_or, 2));
}

TEST(Expr, RestrictionExample) {
  const auto e = parse_function_expr("MAJ3[x3=0]");
  EXPECT_EQ(e.kind, Kind::Restrict);
  EXPECT_EQ(e.arity, 2);
  EXPECT_EQ(evaluate_expr(e), make_builtin(Builtin::And, 2));
}

TEST(Expr, GeneralizedCompositionAndLiterals) {
  const auto e = parse_function_expr("AND2 o (XOR2, tt:3:0x17)");
  EXPECT_EQ(e.arity, 5);
  const BooleanFunction inner[] = {make_builtin(Builtin::Parity, 2), parse_literal("tt:3:0x17")};
  EXPECT_EQ(evaluate_expr(e), compose(make_builtin(Builtin::And, 2), inner));
  EXPECT_EQ(function_from_expr("~OR2"), negate(make_builtin(Builtin::Or, 2)));
  EXPECT_EQ(function_from_expr("or2 o and2 o xor2").arity(), 8);
}

TEST(Expr, Errors) {
  const auto offset = [](const char* text) {
    try {
      parse_function_expr(text);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1L;
  };
  EXPECT_EQ(offset("AND2 o (OR2, OR2, OR2)"), 0);
  EXPECT_EQ(offset("MAJ3[x4=0]"), 5);
  EXPECT_EQ(offset("MAJ2"), 0);
  EXPECT_EQ(offset("FOO3"), 0);
  EXPECT_EQ(offset("AND2 OR2"), 5);
  EXPECT_EQ(offset("tt:3:0x1ff"), 0);
  EXPECT_GE(offset("(AND2"), 0);
  EXPECT_GE(offset("AND^2"), 0);
  EXPECT_THROW(function_from_expr("MAJ3^4"), LimitError);
}

TEST(Expr, RoundTrip) {
  const char* corpus[] = {"MAJ3",
                          "MAJ3^2",
                          "(AND2 o OR2)^2",
                          "MAJ3[x3=0]",
                          "MAJ3[x1=1, x3=0]",
                          "AND2 o (XOR2, tt:3:0x17)",
                          "~OR2 o AND3",
                          "~(OR2 o AND3)",
                          "OR2 o MAJ3 o XOR2",
                          "OR2 o (AND2 o (XOR2, ID1))",
                          "(OR2 o AND2) o XOR2",
                          "~~tt:2:0x6^2[x2=1]",
                          "AND2 o (MAJ3)^2",
                          "PARITY3 o AND4"};
  for (const char* text : corpus) {
    const auto first = parse_function_expr(text);
    const auto printed = print_function_expr(first);
    const auto second = parse_function_expr(printed);
    EXPECT_EQ(first, second) << text << " -> " << printed;
    EXPECT_EQ(print_function_expr(second), printed);
    if (first.arity <= 16) EXPECT_EQ(evaluate_expr(first), evaluate_expr(second)) << text;
  }
}

}  // namespace
}  // namespace adeglab
