#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "bootcopula/combiner.hpp"
#include "bootcopula/error.hpp"
#include "bootcopula/expr.hpp"
#include "support/stats.hpp"

using namespace bootcopula;
using expr::evaluate;
using expr::parse;
using Bindings = std::map<std::string, double, std::less<>>;

TEST(Parse, Examples) {
  const auto product = parse("x1*x2");
  EXPECT_EQ(product.kind, expr::Expr::Kind::binary);
  EXPECT_EQ(product.op, '*');
  EXPECT_EQ(expr::free_variables(product), (std::vector<std::string>{"x1", "x2"}));
  EXPECT_EQ(expr::free_variables(parse("(prev+spec-1)/(sens+spec-1)")),
            (std::vector<std::string>{"prev", "spec", "sens"}));
  EXPECT_EQ(evaluate(parse("2^3^2"), {}), 512.0);
  EXPECT_EQ(expr::free_variables(parse("a+b*a")), (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(expr::free_variables(parse("3.5")).empty());
}

TEST(Evaluate, Examples) {
  EXPECT_DOUBLE_EQ(evaluate(parse("x1*x2"), {{"x1", 0.035}, {"x2", 0.045}}), 0.035 * 0.045);
  EXPECT_NEAR(evaluate(parse("x1*x2"), {{"x1", 0.035}, {"x2", 0.045}}), 0.001575, 1e-18);
  EXPECT_EQ(evaluate(parse("min(x,1)"), {{"x", 2.5}}), 1.0);
  EXPECT_THROW(evaluate(parse("y"), {}), EvaluationError);
}

TEST(Evaluate, DomainErrors) {
  EXPECT_THROW(evaluate(parse("1/x"), {{"x", 0.0}}), EvaluationError);
  EXPECT_THROW(evaluate(parse("log(x)"), {{"x", 0.0}}), EvaluationError);
  EXPECT_THROW(evaluate(parse("log(x)"), {{"x", -1.0}}), EvaluationError);
  EXPECT_THROW(evaluate(parse("sqrt(x)"), {{"x", -1.0}}), EvaluationError);
  EXPECT_THROW(evaluate(parse("exp(x)"), {{"x", 1000.0}}), EvaluationError);
  EXPECT_EQ(evaluate(parse("sqrt(x)"), {{"x", 0.0}}), 0.0);
}

TEST(Parse, SyntaxErrorsCarryOffsetAndExpected) {
  try {
    parse("x1 * (x2 + ");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 11u);
    EXPECT_FALSE(e.expected().empty());
  }
  try {
    parse("foo(x)");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 0u);
    EXPECT_NE(std::string(e.what()).find("unknown function"), std::string::npos);
  }
  try {
    parse("(a+b");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_EQ(e.expected(), (std::vector<std::string>{")"}));
  }
  EXPECT_THROW(parse("a $ b"), SyntaxError);
  EXPECT_THROW(parse("log(a, b)"), SyntaxError);
  EXPECT_THROW(parse("max(a)"), SyntaxError);
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("a b"), SyntaxError);
  EXPECT_THROW(parse("1e"), SyntaxError);
  EXPECT_THROW(parse(std::string(300, '(') + "1" + std::string(300, ')')), SyntaxError);
}

// Each fixture is checked against a hand-parenthesized oracle.
TEST(Precedence, Fixtures) {
  const std::pair<const char*, const char*> fixtures[] = {
      {"a+b*c", "a+(b*c)"},
      {"a*b+c", "(a*b)+c"},
      {"a-b-c", "(a-b)-c"},
      {"a/b/c", "(a/b)/c"},
      {"a-b+c", "(a-b)+c"},
      {"a/b*c", "(a/b)*c"},
      {"a^b^c", "a^(b^c)"},
      {"-a^b", "-(a^b)"},
      {"-a*b", "(-a)*b"},
      {"a*-b", "a*(-b)"},
      {"a^-b", "a^(-b)"},
      {"--a", "-(-a)"},
      {"a+b^c*d", "a+((b^c)*d)"},
      {"a*b^c^d", "a*(b^(c^d))"},
      {"(a+b)*c", "(a+b)*c"},
      {"a-b*c^d/e", "a-((b*(c^d))/e)"},
      {"-a-b", "(-a)-b"},
      {"a^b*c", "(a^b)*c"},
      {"max(a,b)*c+d", "((max(a,b))*c)+d"},
      {"log(a)^b-c/d", "((log(a))^b)-(c/d)"},
  };
  const Bindings env{{"a", 1.7}, {"b", 0.6}, {"c", 2.3}, {"d", 1.1}, {"e", 0.7}};
  for (const auto& [text, oracle] : fixtures) {
    EXPECT_EQ(parse(text), parse(oracle)) << text;
    EXPECT_EQ(evaluate(parse(text), env), evaluate(parse(oracle), env)) << text;
  }
}

TEST(Unparse, RoundTrip) {
  for (const char* text : {"x1*x2", "(prev+spec-1)/(sens+spec-1)", "2^3^2", "-a^-b", "max(0,min(1,x))",
                           "1e-300*x+0.1", "sqrt(exp(log(a)))/3"}) {
    const auto e = parse(text);
    EXPECT_EQ(parse(expr::unparse(e)), e) << text << " -> " << expr::unparse(e);
  }
}

namespace {

std::string random_tree(check::Gen& gen, int depth) {
  static const char* leaves[] = {"a", "b", "c", "0.5", "3", "1e-3", "x_1"};
  if (depth == 0 || gen.uniform() < 0.25) return leaves[gen.index(7)];
  switch (gen.index(5)) {
    case 0:
      return "-" + random_tree(gen, depth - 1);
    case 1:
      return "(" + random_tree(gen, depth - 1) + ")";
    case 2: {
      static const char* fns[] = {"log", "exp", "sqrt"};
      return std::string(fns[gen.index(3)]) + "(" + random_tree(gen, depth - 1) + ")";
    }
    case 3:
      return std::string(gen.uniform() < 0.5 ? "min(" : "max(") + random_tree(gen, depth - 1) + "," +
             random_tree(gen, depth - 1) + ")";
    default: {
      static const char ops[] = "+-*/^";
      return random_tree(gen, depth - 1) + ops[gen.index(5)] + random_tree(gen, depth - 1);
    }
  }
}

}  // namespace

TEST(Property, UnparseRoundTripRandomTrees) {
  check::Gen gen(4);
  for (int i = 0; i < 2000; ++i) {
    const std::string text = random_tree(gen, 5);
    const auto e = parse(text);
    ASSERT_EQ(parse(expr::unparse(e)), e) << text;
  }
}

TEST(Property, ProgramMatchesTreeEvaluator) {
  check::Gen gen(6);
  const std::vector<std::string> vars{"a", "b", "c", "x_1"};
  for (int i = 0; i < 2000; ++i) {
    const auto e = parse(random_tree(gen, 4));
    const expr::Program program(e, vars);
    const std::vector<double> args{gen.uniform(-2, 2), gen.uniform(0, 3), gen.uniform(0.1, 5), gen.uniform()};
    const Bindings env{{"a", args[0]}, {"b", args[1]}, {"c", args[2]}, {"x_1", args[3]}};
    bool tree_failed = false, program_failed = false;
    double tree = 0, prog = 0;
    try { tree = evaluate(e, env); } catch (const EvaluationError&) { tree_failed = true; }
    try { prog = program.run(args); } catch (const EvaluationError&) { program_failed = true; }
    ASSERT_EQ(tree_failed, program_failed) << expr::unparse(e);
    if (!tree_failed) ASSERT_EQ(tree, prog) << expr::unparse(e);
  }
}

TEST(Property, FuzzNeverCrashes) {
  static const char* tokens[] = {"a", "1", "2.5e3", "+", "-", "*", "/", "^", "(", ")", ",", "log",
                                 "min", "max", "sqrt", " ", ".", "e", "$", "exp", "1e", "_x"};
  check::Gen gen(12);
  int parsed = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string text;
    const std::size_t len = 1 + gen.index(12);
    for (std::size_t k = 0; k < len; ++k) text += tokens[gen.index(22)];
    try {
      parse(text);
      ++parsed;
    } catch (const SyntaxError& e) {
      ASSERT_LE(e.offset(), text.size()) << text;
    }
  }
  EXPECT_GT(parsed, 0);
}

TEST(Property, ExpressionEqualsBuiltinProduct) {
  const auto expression = Combiner::expression("x1*x2");
  const auto builtin = Combiner::builtin(BuiltinCombiner::product, 2);
  check::Gen gen(10);
  for (int i = 0; i < 10000; ++i) {
    const std::vector<double> p{gen.uniform(), gen.log_uniform(1e-6, 1e6)};
    ASSERT_EQ(expression(p), builtin(p));
  }
}
