#include <gtest/gtest.h>

#include <random>

#include "sbc/exprlang.hpp"

using namespace sbc;

namespace {

Env env(std::initializer_list<std::pair<const std::string, Value>> items) { return Env(items); }

Value I(std::int64_t v) { return v; }

// Random expressions over x, y, z for round-trip and law checks.
class ExprGen {
public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  Expr expr(int depth) {
    int pick = pick_int(0, depth > 0 ? 5 : 2);
    switch (pick) {
      case 0: return make_variable(var());
      case 1: return make_literal(I(pick_int(-20, 20)));
      case 2: return make_literal(pick_int(-40, 40) / 4.0);
      default: {
        auto op = static_cast<BinOp>(pick_int(0, 3));
        return make_binary(op, expr(depth - 1), expr(depth - 1));
      }
    }
  }

  CodeSnippet snippet() {
    CodeSnippet s;
    int n = pick_int(0, 3);
    for (int i = 0; i < n; ++i) s.statements.push_back({var(true), expr(2)});
    return s;
  }

  Guard guard() {
    if (pick_int(0, 4) == 0) return Guard{};
    return Guard{Comparison{expr(2), static_cast<CmpOp>(pick_int(0, 5)), expr(2)}};
  }

  Env environment() { return env({{"x", I(pick_int(-9, 9))}, {"y", I(pick_int(-9, 9))}, {"z", pick_int(-8, 8) / 2.0}}); }

private:
  int pick_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::string var(bool allow_new = false) {
    static const char* names[] = {"x", "y", "z", "w"};
    return names[pick_int(0, allow_new ? 3 : 2)];
  }
  std::mt19937_64 rng_;
};

}  // namespace

TEST(Values, PrintingAndTypes) {
  EXPECT_EQ(to_string(Value{3.0}), "3.0");
  EXPECT_EQ(to_string(Value{0.25}), "0.25");
  EXPECT_EQ(to_string(I(-7)), "-7");
  EXPECT_EQ(to_string(Value{std::string("a\"b")}), "\"a\\\"b\"");
  EXPECT_EQ(to_string(Value{true}), "true");
  EXPECT_TRUE(compatible(I(1), ValueType::Real));
  EXPECT_FALSE(compatible(Value{1.0}, ValueType::Integer));
  EXPECT_EQ(coerce(I(2), ValueType::Real), Value{2.0});
  EXPECT_EQ(default_value(ValueType::String), Value{std::string()});
}

TEST(ParseGuard, VariableAgainstLiteral) {
  Guard g = parse_guard("A > 200");
  ASSERT_TRUE(g.comparison);
  EXPECT_EQ(g.comparison->lhs, make_variable("A"));
  EXPECT_EQ(g.comparison->op, CmpOp::Gt);
  EXPECT_EQ(g.comparison->rhs, make_literal(I(200)));
}

TEST(ParseGuard, EmptyAndNilAreTrue) {
  EXPECT_TRUE(parse_guard("").is_true());
  EXPECT_TRUE(parse_guard("nil").is_true());
  EXPECT_EQ(to_string(parse_guard("")), "nil");
}

TEST(ParseGuard, VariableAgainstVariable) {
  Guard g = parse_guard("balance > amount");
  ASSERT_TRUE(g.comparison);
  EXPECT_EQ(g.comparison->rhs, make_variable("amount"));
}

TEST(ParseGuard, SingleEqualsMeansEquality) {
  Guard g = parse_guard("cardValid = \"yes\"");
  ASSERT_TRUE(g.comparison);
  EXPECT_EQ(g.comparison->op, CmpOp::Eq);
  EXPECT_EQ(to_string(g), "cardValid == \"yes\"");
}

TEST(ParseGuard, Malformed) {
  EXPECT_THROW(parse_guard("A >"), ParseError);
  EXPECT_THROW(parse_guard("A 200"), ParseError);
  EXPECT_THROW(parse_guard("A > 1 extra"), ParseError);
}

TEST(ParseSnippet, Statements) {
  EXPECT_EQ(parse_snippet("A = 500;").statements.size(), 1u);
  CodeSnippet s = parse_snippet("credit = 3000; c_count = 100;");
  ASSERT_EQ(s.statements.size(), 2u);
  EXPECT_EQ(s.statements[0].variable, "credit");
  EXPECT_EQ(to_string(s), "credit = 3000; c_count = 100;");
  EXPECT_TRUE(parse_snippet("nil").empty());
  EXPECT_TRUE(parse_snippet("").empty());
}

TEST(ParseSnippet, SyntaxErrors) {
  EXPECT_THROW(parse_snippet("x = ;"), ParseError);
  EXPECT_THROW(parse_snippet("x = 1"), ParseError);
  EXPECT_THROW(parse_snippet("x = (1 + 2;"), ParseError);
  EXPECT_THROW(parse_snippet("= 3;"), ParseError);
}

TEST(ParseExpr, PrecedenceAndAssociativity) {
  Expr e = parse_expr("1 + 2 * 3");
  EXPECT_EQ(eval(e, {}), Value{I(7)});
  EXPECT_EQ(eval(parse_expr("10 - 4 - 3"), {}), Value{I(3)});
  EXPECT_EQ(eval(parse_expr("10 - (4 - 3)"), {}), Value{I(9)});
  EXPECT_EQ(to_string(parse_expr("10 - (4 - 3)")), "10 - (4 - 3)");
  EXPECT_EQ(to_string(parse_expr("(a * b) + c")), "a * b + c");
  EXPECT_EQ(to_string(parse_expr("a * (b + c)")), "a * (b + c)");
}

TEST(EvalGuard, Examples) {
  EXPECT_TRUE(eval_guard(parse_guard("A > 200"), env({{"A", I(500)}})));
  EXPECT_TRUE(eval_guard(Guard{}, {}));
  EXPECT_FALSE(eval_guard(parse_guard("c_count <= 0"), env({{"c_count", I(100)}})));
}

TEST(EvalGuard, MixedNumericPromotes) {
  EXPECT_TRUE(eval_guard(parse_guard("balance > amount"), env({{"balance", I(500)}, {"amount", 100.0}})));
  EXPECT_TRUE(eval_guard(parse_guard("x == 2.0"), env({{"x", I(2)}})));
}

TEST(EvalGuard, Errors) {
  EXPECT_THROW(eval_guard(parse_guard("A > 1"), {}), EvalError);
  EXPECT_THROW(eval_guard(parse_guard("s < \"b\""), env({{"s", Value{std::string("a")}}})), EvalError);
  EXPECT_THROW(eval_guard(parse_guard("s == 1"), env({{"s", Value{std::string("a")}}})), EvalError);
  EXPECT_TRUE(eval_guard(parse_guard("s != \"b\""), env({{"s", Value{std::string("a")}}})));
}

TEST(ExecSnippet, Examples) {
  EXPECT_EQ(exec_snippet(parse_snippet("A = 500;"), {}), env({{"A", I(500)}}));
  EXPECT_EQ(exec_snippet(parse_snippet("A = A + 100;"), env({{"A", I(500)}})), env({{"A", I(600)}}));
  EXPECT_EQ(exec_snippet(CodeSnippet{}, env({{"x", I(1)}})), env({{"x", I(1)}}));
}

TEST(ExecSnippet, ValueSemantics) {
  Env before = env({{"A", I(1)}});
  Env after = exec_snippet(parse_snippet("A = A + 1; B = A;"), before);
  EXPECT_EQ(before, env({{"A", I(1)}}));
  EXPECT_EQ(after, env({{"A", I(2)}, {"B", I(2)}}));
}

TEST(ExecSnippet, Errors) {
  EXPECT_THROW(exec_snippet(parse_snippet("x = y;"), {}), EvalError);
  EXPECT_THROW(exec_snippet(parse_snippet("x = 1 / 0;"), {}), EvalError);
  EXPECT_THROW(exec_snippet(parse_snippet("x = 1.0 / 0;"), {}), EvalError);
  EXPECT_THROW(exec_snippet(parse_snippet("x = 9223372036854775807 + 1;"), {}), EvalError);
  EXPECT_THROW(exec_snippet(parse_snippet("x = \"a\" + 1;"), {}), EvalError);
}

TEST(ExecSnippet, ArithmeticTypes) {
  Env e = exec_snippet(parse_snippet("a = 7 / 2; b = 7.0 / 2; c = -3 * 2; d = -(2 - 5);"), {});
  EXPECT_EQ(e.at("a"), Value{I(3)});
  EXPECT_EQ(e.at("b"), Value{3.5});
  EXPECT_EQ(e.at("c"), Value{I(-6)});
  EXPECT_EQ(e.at("d"), Value{I(3)});
}

TEST(Concat, Examples) {
  CodeSnippet a = parse_snippet("credit = 3000;");
  CodeSnippet b = parse_snippet("c_count = 100;");
  EXPECT_EQ(to_string(concat_snippets(a, b)), "credit = 3000; c_count = 100;");
  EXPECT_EQ(concat_snippets(CodeSnippet{}, b), b);
  EXPECT_EQ(concat_snippets(a, CodeSnippet{}), a);
}

TEST(Variables, ReadAndWritten) {
  CodeSnippet s = parse_snippet("a = b + c; d = a * 2;");
  EXPECT_EQ(variables_written(s), (std::set<std::string>{"a", "d"}));
  EXPECT_EQ(variables_read(s), (std::set<std::string>{"a", "b", "c"}));
  EXPECT_EQ(variables_read(parse_guard("x > y")), (std::set<std::string>{"x", "y"}));
}

TEST(Properties, ExpressionPrintParseRoundTrip) {
  ExprGen gen(11);
  for (int i = 0; i < 2000; ++i) {
    Expr e = gen.expr(4);
    std::string text = to_string(e);
    EXPECT_EQ(parse_expr(text), e) << text;
  }
}

TEST(Properties, GuardAndSnippetRoundTrip) {
  ExprGen gen(12);
  for (int i = 0; i < 1000; ++i) {
    Guard g = gen.guard();
    EXPECT_EQ(parse_guard(to_string(g)), g) << to_string(g);
    CodeSnippet s = gen.snippet();
    EXPECT_EQ(parse_snippet(to_string(s)), s) << to_string(s);
  }
}

TEST(Properties, ConcatAssociativeWithNilIdentity) {
  ExprGen gen(13);
  for (int i = 0; i < 500; ++i) {
    CodeSnippet a = gen.snippet(), b = gen.snippet(), c = gen.snippet();
    EXPECT_EQ(concat_snippets(concat_snippets(a, b), c), concat_snippets(a, concat_snippets(b, c)));
    EXPECT_EQ(concat_snippets(CodeSnippet{}, a), a);
    EXPECT_EQ(concat_snippets(a, CodeSnippet{}), a);
  }
}

TEST(Properties, ExecOfConcatIsSequentialExec) {
  ExprGen gen(14);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    CodeSnippet a = gen.snippet(), b = gen.snippet();
    Env e = gen.environment();
    Env stepwise;
    try {
      stepwise = exec_snippet(b, exec_snippet(a, e));
    } catch (const EvalError&) {
      EXPECT_THROW(exec_snippet(concat_snippets(a, b), e), EvalError);
      continue;
    }
    EXPECT_EQ(exec_snippet(concat_snippets(a, b), e), stepwise);
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

TEST(Properties, GuardEvaluationIsPure) {
  ExprGen gen(15);
  for (int i = 0; i < 500; ++i) {
    Guard g = gen.guard();
    Env e = gen.environment();
    Env copy = e;
    bool first = false;
    try {
      first = eval_guard(g, e);
    } catch (const EvalError&) {
      continue;
    }
    EXPECT_EQ(eval_guard(g, e), first);
    EXPECT_EQ(e, copy);
  }
}
