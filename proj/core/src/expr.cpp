#include "adeglab/expr.hpp"

#include <cctype>

#include "adeglab/errors.hpp"

namespace adeglab {

namespace {

constexpr long long kMaxExprArity = 1'000'000;

using Node = std::shared_ptr<const FunctionExpr>;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  FunctionExpr parse() {
    FunctionExpr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }
  [[noreturn]] static void fail_at(const std::string& message, std::size_t at) { throw ParseError(message, at); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  // The composition operator: a lone lower-case 'o' not followed by a name character.
  bool peek_compose() {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != 'o') return false;
    const std::size_t next = pos_ + 1;
    return next == text_.size() || !std::isalnum(static_cast<unsigned char>(text_[next]));
  }

  long long integer() {
    skip_space();
    const std::size_t start = pos_;
    long long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > kMaxExprArity) fail_at("number too large", start);
      ++pos_;
    }
    if (pos_ == start) fail("expected a number");
    return value;
  }

  static int checked_arity(long long arity, std::size_t at) {
    if (arity > kMaxExprArity) fail_at("arity too large", at);
    return static_cast<int>(arity);
  }

  FunctionExpr expr() {
    skip_space();
    const std::size_t start = pos_;
    return compose_tail(unary(), start);
  }

  // f o g o h parses as f o (g o h).
  FunctionExpr compose_tail(FunctionExpr outer, std::size_t start) {
    if (!peek_compose()) return outer;
    ++pos_;
    skip_space();
    const std::size_t inner_start = pos_;
    auto inner = operand();
    long long arity = 0;
    if (inner.size() == 1) {
      inner[0] = std::make_shared<const FunctionExpr>(compose_tail(FunctionExpr(*inner[0]), inner_start));
      arity = static_cast<long long>(outer.arity) * inner[0]->arity;
    } else {
      if (static_cast<int>(inner.size()) != outer.arity) {
        fail_at("outer function has arity " + std::to_string(outer.arity) + " but " +
                    std::to_string(inner.size()) + " inner functions were given",
                start);
      }
      for (const auto& g : inner) arity += g->arity;
    }
    FunctionExpr composed;
    composed.kind = FunctionExpr::Kind::Compose;
    composed.position = start;
    composed.arity = checked_arity(arity, start);
    composed.children.push_back(std::make_shared<const FunctionExpr>(std::move(outer)));
    for (auto& g : inner) composed.children.push_back(std::move(g));
    return composed;
  }

  std::vector<Node> operand() {
    skip_space();
    if (!peek('(')) return {std::make_shared<const FunctionExpr>(unary())};
    // A parenthesised list is a tuple; a single expression may carry postfix operators.
    const std::size_t open = pos_;
    ++pos_;
    std::vector<Node> items{std::make_shared<const FunctionExpr>(expr())};
    while (peek(',')) {
      ++pos_;
      items.push_back(std::make_shared<const FunctionExpr>(expr()));
    }
    expect(')');
    if (items.size() > 1) return items;
    FunctionExpr single = postfix_ops(FunctionExpr(*items[0]), open);
    return {std::make_shared<const FunctionExpr>(std::move(single))};
  }

  FunctionExpr unary() {
    skip_space();
    if (peek('~')) {
      const std::size_t at = pos_++;
      FunctionExpr e;
      e.kind = FunctionExpr::Kind::Negate;
      e.position = at;
      auto child = unary();
      e.arity = child.arity;
      e.children.push_back(std::make_shared<const FunctionExpr>(std::move(child)));
      return e;
    }
    skip_space();
    const std::size_t start = pos_;
    return postfix_ops(primary(), start);
  }

  FunctionExpr postfix_ops(FunctionExpr base, std::size_t start) {
    while (true) {
      if (peek('^')) {
        ++pos_;
        const std::size_t at = pos_;
        const long long d = integer();
        if (d < 1) fail_at("exponent must be at least 1", at);
        long long arity = 1;
        for (long long k = 0; k < d; ++k) {
          arity *= base.arity;
          if (arity > kMaxExprArity) fail_at("arity too large", at);
        }
        FunctionExpr e;
        e.kind = FunctionExpr::Kind::Power;
        e.position = start;
        e.exponent = static_cast<int>(d);
        e.arity = static_cast<int>(arity);
        e.children.push_back(std::make_shared<const FunctionExpr>(std::move(base)));
        base = std::move(e);
      } else if (peek('[')) {
        ++pos_;
        FunctionExpr e;
        e.kind = FunctionExpr::Kind::Restrict;
        e.position = start;
        do {
          skip_space();
          const std::size_t at = pos_;
          if (pos_ >= text_.size() || text_[pos_] != 'x') fail("expected a variable such as x3");
          ++pos_;
          const long long i = integer();
          if (i < 1 || i > base.arity) {
            fail_at("variable x" + std::to_string(i) + " out of range for arity " + std::to_string(base.arity), at);
          }
          if (e.assignment.values.count(static_cast<int>(i))) fail_at("variable assigned twice", at);
          expect('=');
          const long long bit = integer();
          if (bit > 1) fail_at("expected 0 or 1", at);
          e.assignment.values[static_cast<int>(i)] = bit == 1;
        } while (peek(',') && (++pos_, true));
        expect(']');
        e.arity = base.arity - static_cast<int>(e.assignment.values.size());
        e.children.push_back(std::make_shared<const FunctionExpr>(std::move(base)));
        base = std::move(e);
      } else {
        return base;
      }
    }
  }

  FunctionExpr primary() {
    skip_space();
    const std::size_t start = pos_;
    if (peek('(')) {
      ++pos_;
      FunctionExpr inner = expr();
      if (peek(',')) fail("a function list is only allowed after 'o'");
      expect(')');
      return inner;
    }
    if (text_.substr(pos_, 3) == "tt:") {
      std::size_t end = pos_;
      while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == ':')) {
        ++end;
      }
      FunctionExpr e;
      e.kind = FunctionExpr::Kind::Literal;
      e.position = start;
      try {
        const auto f = parse_literal(text_.substr(pos_, end - pos_));
        e.name = to_literal(f);
        e.arity = f.arity();
      } catch (const PreconditionError& err) {
        fail_at(err.what(), start);
      }
      pos_ = end;
      return e;
    }
    std::string tag;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      tag += static_cast<char>(std::toupper(static_cast<unsigned char>(text_[pos_])));
      ++pos_;
    }
    if (tag.empty()) fail("expected a function");
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail_at("function name '" + tag + "' needs an arity suffix, as in " + tag + "3", start);
    }
    const long long n = integer();
    FunctionExpr e;
    e.kind = FunctionExpr::Kind::Builtin;
    e.position = start;
    e.name = tag;
    e.arity = static_cast<int>(n);
    try {
      parse_builtin_tag(tag);
      if ((tag == "NOT" || tag == "ID") && n != 1) throw PreconditionError(tag + " has arity 1");
      if (tag == "MAJ" && n % 2 == 0) throw PreconditionError("MAJ needs odd arity");
      if (n < 1) throw PreconditionError("arity must be positive");
    } catch (const PreconditionError& err) {
      fail_at(err.what(), start);
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

enum class Precedence { Compose, Unary, Postfix };

Precedence precedence(const FunctionExpr& e) {
  switch (e.kind) {
    case FunctionExpr::Kind::Compose: return Precedence::Compose;
    case FunctionExpr::Kind::Negate: return Precedence::Unary;
    default: return Precedence::Postfix;
  }
}

std::string wrap(const FunctionExpr& e, Precedence needed) {
  const std::string s = print_function_expr(e);
  return precedence(e) < needed ? "(" + s + ")" : s;
}

}  // namespace

bool operator==(const FunctionExpr& a, const FunctionExpr& b) {
  if (a.kind != b.kind || a.name != b.name || a.arity != b.arity || a.exponent != b.exponent ||
      a.assignment.values != b.assignment.values || a.children.size() != b.children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!(*a.children[i] == *b.children[i])) return false;
  }
  return true;
}

FunctionExpr parse_function_expr(std::string_view text) { return Parser(text).parse(); }

std::string print_function_expr(const FunctionExpr& e) {
  switch (e.kind) {
    case FunctionExpr::Kind::Builtin: return e.name + std::to_string(e.arity);
    case FunctionExpr::Kind::Literal: return e.name;
    case FunctionExpr::Kind::Negate: return "~" + wrap(*e.children[0], Precedence::Unary);
    case FunctionExpr::Kind::Power:
      return wrap(*e.children[0], Precedence::Postfix) + "^" + std::to_string(e.exponent);
    case FunctionExpr::Kind::Restrict: {
      std::string s = wrap(*e.children[0], Precedence::Postfix) + "[";
      bool first = true;
      for (const auto& [i, bit] : e.assignment.values) {
        if (!first) s += ",";
        first = false;
        s += "x" + std::to_string(i) + "=" + (bit ? "1" : "0");
      }
      return s + "]";
    }
    case FunctionExpr::Kind::Compose: {
      std::string s = wrap(*e.children[0], Precedence::Unary) + " o ";
      if (e.children.size() == 2) return s + wrap(*e.children[1], Precedence::Compose);
      s += "(";
      for (std::size_t i = 1; i < e.children.size(); ++i) {
        if (i > 1) s += ", ";
        s += print_function_expr(*e.children[i]);
      }
      return s + ")";
    }
  }
  return {};
}

BooleanFunction evaluate_expr(const FunctionExpr& e) {
  switch (e.kind) {
    case FunctionExpr::Kind::Builtin: return make_builtin(e.name, e.arity);
    case FunctionExpr::Kind::Literal: return parse_literal(e.name);
    case FunctionExpr::Kind::Negate: return negate(evaluate_expr(*e.children[0]));
    case FunctionExpr::Kind::Power: return power(evaluate_expr(*e.children[0]), e.exponent);
    case FunctionExpr::Kind::Restrict: return restrict(evaluate_expr(*e.children[0]), e.assignment);
    case FunctionExpr::Kind::Compose: {
      if (e.arity > BooleanFunction::kMaxArity) {
        throw LimitError("expression has " + std::to_string(e.arity) + " variables, cap is " +
                         std::to_string(BooleanFunction::kMaxArity));
      }
      const auto outer = evaluate_expr(*e.children[0]);
      if (e.children.size() == 2) return compose(outer, evaluate_expr(*e.children[1]));
      std::vector<BooleanFunction> inner;
      for (std::size_t i = 1; i < e.children.size(); ++i) inner.push_back(evaluate_expr(*e.children[i]));
      return compose(outer, inner);
    }
  }
  return {};
}

BooleanFunction function_from_expr(std::string_view text) { return evaluate_expr(parse_function_expr(text)); }

}  // namespace adeglab
