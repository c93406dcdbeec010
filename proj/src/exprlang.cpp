#include "sbc/exprlang.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace sbc {

std::string_view to_string(ValueType t) {
  switch (t) {
    case ValueType::Real: return "Real";
    case ValueType::Integer: return "Integer";
    case ValueType::String: return "String";
    case ValueType::Boolean: return "Boolean";
  }
  return "?";
}

std::optional<ValueType> parse_value_type(std::string_view name) {
  if (name == "Real") return ValueType::Real;
  if (name == "Integer") return ValueType::Integer;
  if (name == "String") return ValueType::String;
  if (name == "Boolean") return ValueType::Boolean;
  return std::nullopt;
}

ValueType type_of(const Value& v) {
  switch (v.index()) {
    case 0: return ValueType::Real;
    case 1: return ValueType::Integer;
    case 2: return ValueType::String;
    default: return ValueType::Boolean;
  }
}

namespace {

std::string format_real(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_string(const Value& v) {
  switch (v.index()) {
    case 0: return format_real(std::get<double>(v));
    case 1: return std::to_string(std::get<std::int64_t>(v));
    case 2: return quote(std::get<std::string>(v));
    default: return std::get<bool>(v) ? "true" : "false";
  }
}

Value default_value(ValueType t) {
  switch (t) {
    case ValueType::Real: return 0.0;
    case ValueType::Integer: return std::int64_t{0};
    case ValueType::String: return std::string{};
    case ValueType::Boolean: return false;
  }
  return false;
}

bool compatible(const Value& v, ValueType t) {
  ValueType vt = type_of(v);
  return vt == t || (vt == ValueType::Integer && t == ValueType::Real);
}

Value coerce(const Value& v, ValueType t) {
  if (t == ValueType::Real && type_of(v) == ValueType::Integer) {
    return static_cast<double>(std::get<std::int64_t>(v));
  }
  return v;
}

Expr make_literal(Value v) { return Expr{Literal{std::move(v)}}; }
Expr make_variable(std::string name) { return Expr{Variable{std::move(name)}}; }
Expr make_binary(BinOp op, Expr lhs, Expr rhs) {
  return Expr{Binary{op, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}};
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Gt: return ">";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Binary>(&e.node)) {
    return (b->op == BinOp::Add || b->op == BinOp::Sub) ? 1 : 2;
  }
  if (std::holds_alternative<Negate>(e.node)) return 3;
  return 4;
}

char op_char(BinOp op) {
  switch (op) {
    case BinOp::Add: return '+';
    case BinOp::Sub: return '-';
    case BinOp::Mul: return '*';
    case BinOp::Div: return '/';
  }
  return '?';
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print(child, out);
  if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Literal>) {
          out += to_string(n.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, Binary>) {
          int p = precedence(e);
          print_child(*n.lhs, precedence(*n.lhs) < p, out);
          out += ' ';
          out += op_char(n.op);
          out += ' ';
          print_child(*n.rhs, precedence(*n.rhs) <= p, out);
        } else {
          out += '-';
          // A bare numeric literal after '-' would fold back into a negative literal.
          bool numeric = false;
          if (const auto* lit = std::get_if<Literal>(&n.operand->node)) {
            numeric = type_of(lit->value) == ValueType::Integer || type_of(lit->value) == ValueType::Real;
          }
          print_child(*n.operand, numeric || precedence(*n.operand) < 3, out);
        }
      },
      e.node);
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::string to_string(const Guard& g) {
  if (g.is_true()) return "nil";
  const auto& c = *g.comparison;
  return to_string(c.lhs) + " " + std::string(to_string(c.op)) + " " + to_string(c.rhs);
}

std::string to_string(const CodeSnippet& s) {
  if (s.empty()) return "nil";
  std::string out;
  for (const auto& a : s.statements) {
    if (!out.empty()) out += ' ';
    out += a.variable + " = " + to_string(a.value) + ";";
  }
  return out;
}

std::string to_string(const Env& env) {
  std::string out;
  for (const auto& [name, value] : env) {
    if (!out.empty()) out += ", ";
    out += name + "=" + to_string(value);
  }
  return out.empty() ? "(empty)" : out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_keyword_literal(const Token& t) {
  return t.kind == Tok::Ident && (t.text == "true" || t.text == "false");
}

Value number_value(const Token& tok, bool negative, TokenCursor& cur) {
  std::string text = (negative ? "-" : "") + tok.text;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (tok.kind == Tok::Integer) {
    std::int64_t v = 0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) cur.fail_at(tok, "integer literal out of range: " + text);
    return v;
  }
  double d = 0;
  auto res = std::from_chars(first, last, d);
  if (res.ec != std::errc{} || res.ptr != last) cur.fail_at(tok, "malformed real literal: " + text);
  return d;
}

Expr parse_additive(TokenCursor& cur);

Expr parse_primary(TokenCursor& cur) {
  const Token& t = cur.peek();
  if (t.kind == Tok::Integer || t.kind == Tok::Real) {
    cur.next();
    return make_literal(number_value(t, false, cur));
  }
  if (t.kind == Tok::String) {
    cur.next();
    return make_literal(t.text);
  }
  if (is_keyword_literal(t)) {
    cur.next();
    return make_literal(t.text == "true");
  }
  if (t.kind == Tok::Ident) {
    if (t.text == "nil") cur.fail("'nil' is not a value");
    cur.next();
    return make_variable(t.text);
  }
  if (cur.accept_punct("(")) {
    Expr inner = parse_additive(cur);
    cur.expect_punct(")");
    return inner;
  }
  cur.fail("expected an expression but found " + describe(t));
}

Expr parse_unary(TokenCursor& cur) {
  if (cur.is_punct("-")) {
    cur.next();
    const Token& t = cur.peek();
    if (t.kind == Tok::Integer || t.kind == Tok::Real) {
      cur.next();
      return make_literal(number_value(t, true, cur));
    }
    return Expr{Negate{Box<Expr>(parse_unary(cur))}};
  }
  return parse_primary(cur);
}

Expr parse_multiplicative(TokenCursor& cur) {
  Expr lhs = parse_unary(cur);
  while (cur.is_punct("*") || cur.is_punct("/")) {
    BinOp op = cur.next().text == "*" ? BinOp::Mul : BinOp::Div;
    lhs = make_binary(op, std::move(lhs), parse_unary(cur));
  }
  return lhs;
}

Expr parse_additive(TokenCursor& cur) {
  Expr lhs = parse_multiplicative(cur);
  while (cur.is_punct("+") || cur.is_punct("-")) {
    BinOp op = cur.next().text == "+" ? BinOp::Add : BinOp::Sub;
    lhs = make_binary(op, std::move(lhs), parse_multiplicative(cur));
  }
  return lhs;
}

std::optional<CmpOp> cmp_op(const Token& t) {
  if (t.kind != Tok::Punct) return std::nullopt;
  if (t.text == ">") return CmpOp::Gt;
  if (t.text == "<") return CmpOp::Lt;
  if (t.text == ">=") return CmpOp::Ge;
  if (t.text == "<=") return CmpOp::Le;
  if (t.text == "==" || t.text == "=") return CmpOp::Eq;
  if (t.text == "!=") return CmpOp::Ne;
  return std::nullopt;
}

void expect_end(TokenCursor& cur) {
  if (!cur.at_end()) cur.fail("unexpected " + describe(cur.peek()));
}

void reject_invalid(const std::vector<Token>& toks) {
  for (const auto& t : toks) {
    if (t.kind == Tok::Invalid) throw ParseError(t.loc, t.text);
  }
}

TokenCursor cursor_for(std::string_view text) {
  auto toks = tokenize(text);
  reject_invalid(toks);
  return TokenCursor(std::move(toks));
}

}  // namespace

Expr parse_expr(TokenCursor& cur) { return parse_additive(cur); }

Comparison parse_comparison(TokenCursor& cur) {
  Expr lhs = parse_additive(cur);
  auto op = cmp_op(cur.peek());
  if (!op) cur.fail("expected a comparison operator but found " + describe(cur.peek()));
  cur.next();
  Expr rhs = parse_additive(cur);
  return Comparison{std::move(lhs), *op, std::move(rhs)};
}

CodeSnippet parse_snippet(TokenCursor& cur) {
  CodeSnippet s;
  if (cur.accept_ident("nil")) return s;
  while (cur.peek().kind == Tok::Ident && cur.is_punct("=", 1)) {
    std::string name = cur.next().text;
    cur.next();
    Expr value = parse_additive(cur);
    cur.expect_punct(";");
    s.statements.push_back({std::move(name), std::move(value)});
  }
  return s;
}

Guard parse_guard(std::string_view text) {
  TokenCursor cur = cursor_for(text);
  if (cur.at_end()) return {};
  if (cur.is_ident("nil") && cur.peek(1).kind == Tok::End) return {};
  Guard g{parse_comparison(cur)};
  expect_end(cur);
  return g;
}

CodeSnippet parse_snippet(std::string_view text) {
  TokenCursor cur = cursor_for(text);
  CodeSnippet s = parse_snippet(cur);
  expect_end(cur);
  return s;
}

Expr parse_expr(std::string_view text) {
  TokenCursor cur = cursor_for(text);
  Expr e = parse_additive(cur);
  expect_end(cur);
  return e;
}

Value parse_literal(std::string_view text) {
  TokenCursor cur = cursor_for(text);
  Expr e = parse_unary(cur);
  expect_end(cur);
  const auto* lit = std::get_if<Literal>(&e.node);
  if (!lit) throw ParseError(SourceLoc{1, 1}, "expected a literal value: " + std::string(text));
  return lit->value;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool numeric(const Value& v) { return v.index() <= 1; }

double as_real(const Value& v) {
  return v.index() == 0 ? std::get<double>(v) : static_cast<double>(std::get<std::int64_t>(v));
}

[[noreturn]] void type_error(const std::string& what, const Value& a, const Value& b) {
  throw EvalError("type mismatch: cannot apply '" + what + "' to " + std::string(to_string(type_of(a))) +
                  " and " + std::string(to_string(type_of(b))));
}

Value arith(BinOp op, const Value& a, const Value& b) {
  std::string sym(1, op_char(op));
  if (!numeric(a) || !numeric(b)) type_error(sym, a, b);
  if (a.index() == 1 && b.index() == 1) {
    std::int64_t x = std::get<std::int64_t>(a);
    std::int64_t y = std::get<std::int64_t>(b);
    std::int64_t r = 0;
    bool overflow = false;
    switch (op) {
      case BinOp::Add: overflow = __builtin_add_overflow(x, y, &r); break;
      case BinOp::Sub: overflow = __builtin_sub_overflow(x, y, &r); break;
      case BinOp::Mul: overflow = __builtin_mul_overflow(x, y, &r); break;
      case BinOp::Div:
        if (y == 0) throw EvalError("division by zero");
        if (x == std::numeric_limits<std::int64_t>::min() && y == -1) overflow = true;
        else r = x / y;
        break;
    }
    if (overflow) throw EvalError("integer overflow in '" + sym + "'");
    return r;
  }
  double x = as_real(a);
  double y = as_real(b);
  switch (op) {
    case BinOp::Add: return x + y;
    case BinOp::Sub: return x - y;
    case BinOp::Mul: return x * y;
    case BinOp::Div:
      if (y == 0.0) throw EvalError("division by zero");
      return x / y;
  }
  return 0.0;
}

}  // namespace

Value eval(const Expr& e, const Env& env) {
  return std::visit(
      [&](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          auto it = env.find(n.name);
          if (it == env.end()) throw EvalError("unbound variable '" + n.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<T, Binary>) {
          return arith(n.op, eval(*n.lhs, env), eval(*n.rhs, env));
        } else {
          Value v = eval(*n.operand, env);
          if (v.index() == 1) {
            auto x = std::get<std::int64_t>(v);
            if (x == std::numeric_limits<std::int64_t>::min()) throw EvalError("integer overflow in '-'");
            return -x;
          }
          if (v.index() == 0) return -std::get<double>(v);
          throw EvalError("type mismatch: cannot negate " + std::string(to_string(type_of(v))));
        }
      },
      e.node);
}

bool eval_guard(const Guard& g, const Env& env) {
  if (g.is_true()) return true;
  const auto& c = *g.comparison;
  Value a = eval(c.lhs, env);
  Value b = eval(c.rhs, env);
  std::string sym(to_string(c.op));
  bool equality = c.op == CmpOp::Eq || c.op == CmpOp::Ne;

  if (numeric(a) && numeric(b)) {
    if (a.index() == 1 && b.index() == 1) {
      auto x = std::get<std::int64_t>(a);
      auto y = std::get<std::int64_t>(b);
      switch (c.op) {
        case CmpOp::Gt: return x > y;
        case CmpOp::Lt: return x < y;
        case CmpOp::Ge: return x >= y;
        case CmpOp::Le: return x <= y;
        case CmpOp::Eq: return x == y;
        case CmpOp::Ne: return x != y;
      }
    }
    double x = as_real(a);
    double y = as_real(b);
    switch (c.op) {
      case CmpOp::Gt: return x > y;
      case CmpOp::Lt: return x < y;
      case CmpOp::Ge: return x >= y;
      case CmpOp::Le: return x <= y;
      case CmpOp::Eq: return x == y;
      case CmpOp::Ne: return x != y;
    }
  }
  if (a.index() != b.index() || !equality) type_error(sym, a, b);
  bool eq = a == b;
  return c.op == CmpOp::Eq ? eq : !eq;
}

Env exec_snippet(const CodeSnippet& s, const Env& env) {
  Env out = env;
  for (const auto& a : s.statements) {
    Value v = eval(a.value, out);
    out[a.variable] = std::move(v);
  }
  return out;
}

CodeSnippet concat_snippets(const CodeSnippet& a, const CodeSnippet& b) {
  CodeSnippet out = a;
  out.statements.insert(out.statements.end(), b.statements.begin(), b.statements.end());
  return out;
}

void collect_reads(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Variable>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_reads(*n.lhs, out);
          collect_reads(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, Negate>) {
          collect_reads(*n.operand, out);
        }
      },
      e.node);
}

std::set<std::string> variables_read(const Guard& g) {
  std::set<std::string> out;
  if (g.comparison) {
    collect_reads(g.comparison->lhs, out);
    collect_reads(g.comparison->rhs, out);
  }
  return out;
}

std::set<std::string> variables_read(const CodeSnippet& s) {
  std::set<std::string> out;
  for (const auto& a : s.statements) collect_reads(a.value, out);
  return out;
}

std::set<std::string> variables_written(const CodeSnippet& s) {
  std::set<std::string> out;
  for (const auto& a : s.statements) out.insert(a.variable);
  return out;
}

}  // namespace sbc
