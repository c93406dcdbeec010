#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sbc/box.hpp"
#include "sbc/lexer.hpp"

namespace sbc {

enum class ValueType { Real, Integer, String, Boolean };

std::string_view to_string(ValueType t);
std::optional<ValueType> parse_value_type(std::string_view name);

// Runtime value of a snippet variable or channel parameter.
using Value = std::variant<double, std::int64_t, std::string, bool>;

ValueType type_of(const Value& v);
std::string to_string(const Value& v);
// Default used by lenient stub mode: 0, 0.0, "" or false.
Value default_value(ValueType t);
// Whether a value may be bound to a parameter of type `t`. Integer widens to Real.
bool compatible(const Value& v, ValueType t);
Value coerce(const Value& v, ValueType t);

struct Expr;

struct Literal {
  Value value;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Variable {
  std::string name;
  friend bool operator==(const Variable&, const Variable&) = default;
};

enum class BinOp { Add, Sub, Mul, Div };

struct Binary {
  BinOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  friend bool operator==(const Binary&, const Binary&) = default;
};

struct Negate {
  Box<Expr> operand;
  friend bool operator==(const Negate&, const Negate&) = default;
};

struct Expr {
  std::variant<Literal, Variable, Binary, Negate> node;
  friend bool operator==(const Expr&, const Expr&) = default;
};

Expr make_literal(Value v);
Expr make_variable(std::string name);
Expr make_binary(BinOp op, Expr lhs, Expr rhs);

enum class CmpOp { Gt, Lt, Ge, Le, Eq, Ne };

std::string_view to_string(CmpOp op);

struct Comparison {
  Expr lhs;
  CmpOp op;
  Expr rhs;
  friend bool operator==(const Comparison&, const Comparison&) = default;
};

// A transition guard. An empty comparison is the implicit TRUE guard, written `nil`.
struct Guard {
  std::optional<Comparison> comparison;

  bool is_true() const { return !comparison.has_value(); }
  friend bool operator==(const Guard&, const Guard&) = default;
};

struct Assignment {
  std::string variable;
  Expr value;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Straight-line list of assignments. The empty snippet is written `nil`.
struct CodeSnippet {
  std::vector<Assignment> statements;

  bool empty() const { return statements.empty(); }
  friend bool operator==(const CodeSnippet&, const CodeSnippet&) = default;
};

using Env = std::map<std::string, Value>;

std::string to_string(const Expr& e);
std::string to_string(const Guard& g);         // "nil" for the TRUE guard
std::string to_string(const CodeSnippet& s);   // "nil" for the empty snippet
std::string to_string(const Env& env);         // "a=1, b=\"x\"" in name order

// Text entry points. Empty text or `nil` yields the TRUE guard / empty snippet.
Guard parse_guard(std::string_view text);
CodeSnippet parse_snippet(std::string_view text);
Expr parse_expr(std::string_view text);
// A single literal, as used in scenario bindings.
Value parse_literal(std::string_view text);

// Token-level entry points shared with the model parser.
Expr parse_expr(TokenCursor& cur);
Comparison parse_comparison(TokenCursor& cur);
// Parses `name = expr ;` statements while the next tokens look like an
// assignment. Accepts a lone `nil`.
CodeSnippet parse_snippet(TokenCursor& cur);

Value eval(const Expr& e, const Env& env);
bool eval_guard(const Guard& g, const Env& env);
Env exec_snippet(const CodeSnippet& s, const Env& env);
CodeSnippet concat_snippets(const CodeSnippet& a, const CodeSnippet& b);

void collect_reads(const Expr& e, std::set<std::string>& out);
std::set<std::string> variables_read(const Guard& g);
// Every variable read by any statement, including ones the snippet also writes.
std::set<std::string> variables_read(const CodeSnippet& s);
std::set<std::string> variables_written(const CodeSnippet& s);

}  // namespace sbc
