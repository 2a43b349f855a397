#include "bootcopula/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "bootcopula/error.hpp"

namespace bootcopula::expr {
namespace {

enum class Tok { number, name, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double value = 0.0;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + std::string(t.text) + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::end, start, {}};
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_')) {
        ++pos_;
      }
      return {Tok::name, start, src_.substr(start, pos_ - start)};
    }
    ++pos_;
    const auto one = [&](Tok k) { return Token{k, start, src_.substr(start, 1)}; };
    switch (c) {
      case '+': return one(Tok::plus);
      case '-': return one(Tok::minus);
      case '*': return one(Tok::star);
      case '/': return one(Tok::slash);
      case '^': return one(Tok::caret);
      case '(': return one(Tok::lparen);
      case ')': return one(Tok::rparen);
      case ',': return one(Tok::comma);
      default: break;
    }
    throw SyntaxError("unexpected character '" + std::string(1, c) + "' at offset " +
                          std::to_string(start),
                      start, {"number", "name", "(", "-"});
  }

 private:
  Token number(std::size_t start) {
    const auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      throw SyntaxError("malformed number at offset " + std::to_string(start), start, {"digit"});
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        throw SyntaxError("malformed exponent at offset " + std::to_string(save), save, {"digit"});
      }
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    const std::string owned(text);
    char* end = nullptr;
    const double v = std::strtod(owned.c_str(), &end);
    if (!std::isfinite(v)) {
      throw SyntaxError("number out of range at offset " + std::to_string(start), start, {"number"});
    }
    return {Tok::number, start, text, v};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

constexpr int kSumPower = 10;
constexpr int kProductPower = 20;
constexpr int kUnaryPower = 30;
constexpr int kPowPower = 40;

int left_power(Tok t) {
  switch (t) {
    case Tok::plus:
    case Tok::minus:
      return kSumPower;
    case Tok::star:
    case Tok::slash:
      return kProductPower;
    case Tok::caret:
      return kPowPower;
    default:
      return -1;
  }
}

std::size_t function_arity_min(std::string_view name) {
  if (name == "log" || name == "exp" || name == "sqrt") return 1;
  if (name == "min" || name == "max") return 2;
  return 0;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  Expr parse_all() {
    Expr e = parse_expr(0);
    if (current_.kind != Tok::end) {
      fail({"+", "-", "*", "/", "^", "end of input"});
    }
    return e;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::ostringstream msg;
    msg << "syntax error at offset " << current_.offset << ": unexpected " << describe(current_)
        << ", expected one of {";
    for (std::size_t i = 0; i < expected.size(); ++i) msg << (i ? ", " : "") << '\'' << expected[i] << '\'';
    msg << "}";
    throw SyntaxError(msg.str(), current_.offset, std::move(expected));
  }

  void expect(Tok kind, const char* text) {
    if (current_.kind != kind) fail({text});
    advance();
  }

  Expr parse_expr(int min_power) {
    if (++depth_ > kMaxDepth) {
      throw SyntaxError("expression nested too deeply at offset " + std::to_string(current_.offset),
                        current_.offset, {});
    }
    Expr lhs = parse_prefix();
    for (;;) {
      const Tok t = current_.kind;
      const int power = left_power(t);
      if (power < 0 || power <= min_power) break;
      const char op = current_.text[0];
      advance();
      // ^ is right associative: its right operand may contain another ^.
      Expr rhs = parse_expr(t == Tok::caret ? power - 1 : power);
      Expr node;
      node.kind = Expr::Kind::binary;
      node.op = op;
      node.args.push_back(std::move(lhs));
      node.args.push_back(std::move(rhs));
      lhs = std::move(node);
    }
    --depth_;
    return lhs;
  }

  Expr parse_prefix() {
    switch (current_.kind) {
      case Tok::number: {
        Expr e;
        e.kind = Expr::Kind::number;
        e.value = current_.value;
        advance();
        return e;
      }
      case Tok::minus: {
        advance();
        Expr e;
        e.kind = Expr::Kind::negate;
        e.args.push_back(parse_expr(kUnaryPower));
        return e;
      }
      case Tok::lparen: {
        advance();
        Expr e = parse_expr(0);
        expect(Tok::rparen, ")");
        return e;
      }
      case Tok::name: {
        const Token name = current_;
        advance();
        if (current_.kind != Tok::lparen) {
          Expr e;
          e.kind = Expr::Kind::variable;
          e.name = std::string(name.text);
          return e;
        }
        const std::size_t min_args = function_arity_min(name.text);
        if (min_args == 0) {
          throw SyntaxError("unknown function '" + std::string(name.text) + "' at offset " +
                                std::to_string(name.offset),
                            name.offset, {"log", "exp", "sqrt", "min", "max"});
        }
        advance();
        Expr call;
        call.kind = Expr::Kind::call;
        call.name = std::string(name.text);
        call.args.push_back(parse_expr(0));
        while (current_.kind == Tok::comma) {
          advance();
          call.args.push_back(parse_expr(0));
        }
        if (current_.kind != Tok::rparen) fail({",", ")"});
        const bool unary = min_args == 1;
        if ((unary && call.args.size() != 1) || (!unary && call.args.size() < 2)) {
          throw SyntaxError("wrong number of arguments to '" + call.name + "' at offset " +
                                std::to_string(name.offset),
                            name.offset, {unary ? "1 argument" : "2 or more arguments"});
        }
        advance();
        return call;
      }
      default:
        fail({"number", "name", "(", "-"});
    }
  }

  static constexpr int kMaxDepth = 256;

  Lexer lexer_;
  Token current_{Tok::end, 0, {}};
  int depth_ = 0;
};

[[noreturn]] void eval_fail(const std::string& what) { throw EvaluationError(what); }

double apply_binary(char op, double a, double b) {
  switch (op) {
    case '+':
      return a + b;
    case '-':
      return a - b;
    case '*':
      return a * b;
    case '/':
      if (b == 0.0) eval_fail("division by zero");
      return a / b;
    case '^':
      return std::pow(a, b);
  }
  eval_fail("unknown operator");
}

double apply_unary(std::string_view fn, double a) {
  if (fn == "log") {
    if (!(a > 0.0)) eval_fail("log of non-positive value");
    return std::log(a);
  }
  if (fn == "exp") return std::exp(a);
  if (!(a >= 0.0)) eval_fail("sqrt of negative value");
  return std::sqrt(a);
}

double check_finite(double v) {
  if (!std::isfinite(v)) eval_fail("expression produced a non-finite value");
  return v;
}

double eval_node(const Expr& e, const std::map<std::string, double, std::less<>>& bindings) {
  switch (e.kind) {
    case Expr::Kind::number:
      return e.value;
    case Expr::Kind::variable: {
      const auto it = bindings.find(e.name);
      if (it == bindings.end()) eval_fail("unbound variable '" + e.name + "'");
      return it->second;
    }
    case Expr::Kind::negate:
      return -eval_node(e.args[0], bindings);
    case Expr::Kind::binary:
      return apply_binary(e.op, eval_node(e.args[0], bindings), eval_node(e.args[1], bindings));
    case Expr::Kind::call: {
      if (e.name == "min" || e.name == "max") {
        double acc = eval_node(e.args[0], bindings);
        for (std::size_t i = 1; i < e.args.size(); ++i) {
          const double v = eval_node(e.args[i], bindings);
          acc = e.name == "min" ? std::min(acc, v) : std::max(acc, v);
        }
        return acc;
      }
      return apply_unary(e.name, eval_node(e.args[0], bindings));
    }
  }
  eval_fail("malformed expression");
}

void collect(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::variable) {
    if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
    return;
  }
  for (const auto& a : e.args) collect(a, out);
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string unparse(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", e.value);
      return buf;
    }
    case Expr::Kind::variable:
      return e.name;
    case Expr::Kind::negate:
      return "(-" + unparse(e.args[0]) + ")";
    case Expr::Kind::binary:
      return "(" + unparse(e.args[0]) + e.op + unparse(e.args[1]) + ")";
    case Expr::Kind::call: {
      std::string out = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ",";
        out += unparse(e.args[i]);
      }
      return out + ")";
    }
  }
  return {};
}

std::vector<std::string> free_variables(const Expr& e) {
  std::vector<std::string> out;
  collect(e, out);
  return out;
}

double evaluate(const Expr& e, const std::map<std::string, double, std::less<>>& bindings) {
  return check_finite(eval_node(e, bindings));
}

Program::Program(const Expr& e, std::vector<std::string> variables)
    : variables_(std::move(variables)) {
  for (const auto& name : free_variables(e)) {
    if (std::find(variables_.begin(), variables_.end(), name) == variables_.end()) {
      eval_fail("unbound variable '" + name + "'");
    }
  }
  emit(e);
  std::size_t depth = 0;
  for (const auto& ins : code_) {
    switch (ins.op) {
      case Op::push:
      case Op::load:
        max_depth_ = std::max(max_depth_, ++depth);
        break;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
      case Op::pow:
        --depth;
        break;
      case Op::min:
      case Op::max:
        depth -= ins.operand - 1;
        break;
      default:
        break;
    }
  }
}

void Program::emit(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::number:
      code_.push_back({Op::push, 0, e.value});
      return;
    case Expr::Kind::variable: {
      const auto it = std::find(variables_.begin(), variables_.end(), e.name);
      code_.push_back({Op::load, static_cast<std::size_t>(it - variables_.begin())});
      return;
    }
    case Expr::Kind::negate:
      emit(e.args[0]);
      code_.push_back({Op::neg});
      return;
    case Expr::Kind::binary: {
      emit(e.args[0]);
      emit(e.args[1]);
      Op op = Op::add;
      switch (e.op) {
        case '+': op = Op::add; break;
        case '-': op = Op::sub; break;
        case '*': op = Op::mul; break;
        case '/': op = Op::div; break;
        case '^': op = Op::pow; break;
      }
      code_.push_back({op});
      return;
    }
    case Expr::Kind::call: {
      for (const auto& a : e.args) emit(a);
      if (e.name == "min" || e.name == "max") {
        code_.push_back({e.name == "min" ? Op::min : Op::max, e.args.size()});
      } else {
        code_.push_back({e.name == "log" ? Op::log : e.name == "exp" ? Op::exp : Op::sqrt});
      }
      return;
    }
  }
}

double Program::run(std::span<const double> args) const {
  if (args.size() != variables_.size()) {
    eval_fail("expected " + std::to_string(variables_.size()) + " arguments, got " +
              std::to_string(args.size()));
  }
  // Small fixed stack covers every realistic combiner; fall back to the heap otherwise.
  double small[32] = {};
  std::vector<double> big;
  double* stack = small;
  if (max_depth_ > 32) {
    big.resize(max_depth_);
    stack = big.data();
  }
  std::size_t top = 0;
  for (const auto& ins : code_) {
    switch (ins.op) {
      case Op::push:
        stack[top++] = ins.value;
        break;
      case Op::load:
        stack[top++] = args[ins.operand];
        break;
      case Op::neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
      case Op::pow: {
        static constexpr char ops[] = {'+', '-', '*', '/', '^'};
        const char op = ops[static_cast<int>(ins.op) - static_cast<int>(Op::add)];
        const double b = stack[--top];
        stack[top - 1] = apply_binary(op, stack[top - 1], b);
        break;
      }
      case Op::log:
        stack[top - 1] = apply_unary("log", stack[top - 1]);
        break;
      case Op::exp:
        stack[top - 1] = apply_unary("exp", stack[top - 1]);
        break;
      case Op::sqrt:
        stack[top - 1] = apply_unary("sqrt", stack[top - 1]);
        break;
      case Op::min:
      case Op::max: {
        const std::size_t base = top - ins.operand;
        double acc = stack[base];
        for (std::size_t i = base + 1; i < top; ++i) {
          acc = ins.op == Op::min ? std::min(acc, stack[i]) : std::max(acc, stack[i]);
        }
        top = base;
        stack[top++] = acc;
        break;
      }
    }
  }
  return check_finite(stack[0]);
}

}  // namespace bootcopula::expr
