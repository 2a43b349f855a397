#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bootcopula::expr {

/// Abstract syntax tree of a combination expression.
///
/// Grammar (highest precedence first):
///   primary  := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
///   power    := primary ('^' unary)?          right associative
///   unary    := '-' unary | power
///   product  := unary (('*' | '/') unary)*
///   sum      := product (('+' | '-') product)*
/// Functions: log, exp, sqrt (one argument), min, max (two or more).
struct Expr {
  enum class Kind { number, variable, negate, binary, call };

  Kind kind = Kind::number;
  double value = 0.0;      ///< number
  std::string name;        ///< variable or function name
  char op = 0;             ///< binary operator: + - * / ^
  std::vector<Expr> args;  ///< operands / call arguments

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Throws SyntaxError carrying the byte offset and the set of tokens that
/// would have been accepted there.
Expr parse(std::string_view text);

/// Fully parenthesized rendering; parse(unparse(e)) == e.
std::string unparse(const Expr& e);

/// Variable names in order of first appearance, without duplicates.
std::vector<std::string> free_variables(const Expr& e);

/// Evaluates with named bindings. Throws EvaluationError for unbound
/// variables, division by zero, log/sqrt outside their domain, or a
/// non-finite result.
double evaluate(const Expr& e, const std::map<std::string, double, std::less<>>& bindings);

/// Expression lowered to a postfix program over positional variables.
/// Produces results identical to evaluate() for the same inputs.
class Program {
 public:
  /// `variables[i]` is bound to argument i of run(). Every free variable of
  /// `e` must be listed, otherwise EvaluationError is thrown.
  Program(const Expr& e, std::vector<std::string> variables);

  std::size_t arity() const noexcept { return variables_.size(); }
  const std::vector<std::string>& variables() const noexcept { return variables_; }

  double run(std::span<const double> args) const;

 private:
  enum class Op : unsigned char { push, load, neg, add, sub, mul, div, pow, log, exp, sqrt, min, max };
  struct Instruction {
    Op op;
    std::size_t operand = 0;  ///< variable index, or argument count for min/max
    double value = 0.0;
  };

  void emit(const Expr& e);

  std::vector<std::string> variables_;
  std::vector<Instruction> code_;
  std::size_t max_depth_ = 0;
};

}  // namespace bootcopula::expr
