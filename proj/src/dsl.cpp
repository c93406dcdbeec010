#include "sbc/dsl.hpp"

#include <fstream>
#include <sstream>

namespace sbc {

SourceModel::SourceModel(std::string path, std::string_view raw) : path_(std::move(path)) {
  if (raw.substr(0, 3) == "\xEF\xBB\xBF") raw.remove_prefix(3);
  text_ = normalize_newlines(raw);
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < text_.size(); ++i) {
    if (text_[i] == '\n') line_starts_.push_back(i + 1);
  }
}

SourceModel SourceModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SbcError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return SourceModel(path, ss.str());
}

std::string_view SourceModel::line(int n) const {
  if (n < 1 || static_cast<std::size_t>(n) > line_starts_.size()) return {};
  std::size_t start = line_starts_[n - 1];
  std::size_t end = text_.find('\n', start);
  if (end == std::string::npos) end = text_.size();
  return std::string_view(text_).substr(start, end - start);
}

namespace {

bool reserved(std::string_view w) {
  return w == kStop || w == "nil" || w == "true" || w == "false" || w == "alt" || w == "par" ||
         w == "loop" || w == "ref" || w == "init";
}

const Token& expect_name(TokenCursor& cur, std::string_view what) {
  const Token& t = cur.expect_ident(what);
  if (reserved(t.text)) cur.fail_at(t, "'" + t.text + "' is a reserved word and cannot be used as " + std::string(what));
  return t;
}

Parameter parse_parameter(TokenCursor& cur) {
  const Token& dir = cur.expect_ident("parameter direction");
  Parameter p;
  if (dir.text == "in") p.direction = Direction::In;
  else if (dir.text == "out") p.direction = Direction::Out;
  else if (dir.text == "inout") p.direction = Direction::InOut;
  else cur.fail_at(dir, "unknown parameter direction '" + dir.text + "' (expected in, out or inout)");
  p.name = expect_name(cur, "parameter name").text;
  if (!cur.is_punct(":")) cur.fail("parameter '" + p.name + "' is missing its type");
  cur.next();
  const Token& type = cur.expect_ident("parameter type");
  auto vt = parse_value_type(type.text);
  if (!vt) cur.fail_at(type, "unknown parameter type '" + type.text + "' (expected Real, Integer, String or Boolean)");
  p.type = *vt;
  return p;
}

ChannelSignature parse_signature(TokenCursor& cur) {
  ChannelSignature sig;
  const Token& name = expect_name(cur, "channel name");
  sig.name = name.text;
  sig.loc = name.loc;
  if (cur.accept_punct("(")) {
    if (!cur.is_punct(")")) {
      do {
        const Token& at = cur.peek();
        Parameter p = parse_parameter(cur);
        if (sig.find(p.name)) cur.fail_at(at, "duplicate parameter '" + p.name + "' in channel '" + sig.name + "'");
        sig.params.push_back(std::move(p));
      } while (cur.accept_punct(";"));
    }
    cur.expect_punct(")");
  }
  return sig;
}

bool guard_ahead(const TokenCursor& cur) {
  for (std::size_t k = 0;; ++k) {
    const Token& t = cur.peek(k);
    if (t.kind == Tok::End) return false;
    if (t.kind == Tok::Punct) {
      if (t.text == "?") return true;
      if (t.text == "]" || t.text == "/" || t.text == ";") return false;
    }
  }
}

// Inside the brackets: [guard ?] interaction [/ snippet]
Prefix parse_prefix_body(TokenCursor& cur) {
  Prefix p;
  p.loc = cur.peek().loc;
  if (guard_ahead(cur)) {
    if (cur.is_ident("nil") && cur.is_punct("?", 1)) {
      cur.next();
    } else {
      p.guard.comparison = parse_comparison(cur);
    }
    cur.expect_punct("?");
  }
  p.interaction = expect_name(cur, "interaction id").text;
  if (cur.accept_punct("/")) {
    p.snippet = parse_snippet(cur);
    if (!cur.is_punct("]")) cur.fail("expected ']' or another 'name = expr;' statement but found " + describe(cur.peek()));
  }
  return p;
}

Prefix parse_bracketed_prefix(TokenCursor& cur) {
  cur.expect_punct("[");
  Prefix p = parse_prefix_body(cur);
  cur.expect_punct("]");
  return p;
}

StateExpr parse_state_chain(TokenCursor& cur);

StateExpr parse_state_primary(TokenCursor& cur) {
  if (cur.accept_ident(kStop)) return make_inactive();
  if (cur.accept_ident("loop")) return make_loop(expect_name(cur, "itg name").text);
  if (cur.accept_ident("ref")) return make_ref(expect_name(cur, "state constant").text);
  if (cur.accept_punct("(")) {
    StateExpr inner = parse_state_chain(cur);
    cur.expect_punct(")");
    return inner;
  }
  if (cur.is_punct("[")) {
    Prefix p = parse_bracketed_prefix(cur);
    cur.expect_punct(".");
    return make_prefixed(std::move(p), parse_state_primary(cur));
  }
  cur.fail("expected a state expression (STOP, [prefix] . e, (e alt e), (e par e), loop X or ref X) but found " +
           describe(cur.peek()));
}

// e (op e)* with a single operator kind, left associative.
StateExpr parse_state_chain(TokenCursor& cur) {
  StateExpr lhs = parse_state_primary(cur);
  std::string op;
  while (cur.is_ident("alt") || cur.is_ident("par")) {
    const Token& t = cur.next();
    if (!op.empty() && op != t.text) cur.fail_at(t, "mixing 'alt' and 'par' requires parentheses");
    op = t.text;
    StateExpr rhs = parse_state_primary(cur);
    lhs = op == "alt" ? make_alt(std::move(lhs), std::move(rhs)) : make_par(std::move(lhs), std::move(rhs));
  }
  return lhs;
}

class ModelParser {
public:
  explicit ModelParser(std::string_view text) : cur_(tokenize(normalize_newlines(text))) {}

  ParseResult run() {
    while (!cur_.at_end()) {
      std::size_t start = cur_.position();
      try {
        declaration();
      } catch (const ParseError& e) {
        report(e);
        recover_top(start);
      }
    }
    // A dropped declaration would otherwise resurface as a dangling
    // reference at every use site.
    if (!syntax_errors_) {
      auto refs = check_references(result_.model);
      result_.diagnostics.insert(result_.diagnostics.end(), refs.begin(), refs.end());
    }
    return std::move(result_);
  }

private:
  void report(const ParseError& e) {
    result_.diagnostics.push_back({e.loc(), Severity::Error, "syntax", e.what()});
    syntax_errors_ = true;
  }

  void duplicate(const Token& name, const std::string& kind) {
    result_.diagnostics.push_back(
        {name.loc, Severity::Error, "duplicate-declaration", "duplicate " + kind + " '" + name.text + "'"});
  }

  static bool starts_declaration(const Token& t) {
    return t.kind == Tok::Ident && (t.text == "actor" || t.text == "component" || t.text == "channel" ||
                                    t.text == "interaction" || t.text == "itg" || t.text == "def");
  }

  // Skip to just past the ';' or '}' that ends the broken declaration, or to
  // the next token that plainly starts a new one.
  void recover_top(std::size_t start) {
    if (cur_.position() == start) cur_.next();
    int depth = 0;  // braces
    int nest = 0;   // parentheses and brackets
    while (!cur_.at_end()) {
      const Token& t = cur_.peek();
      if (depth == 0 && starts_declaration(t) && cur_.peek(1).kind == Tok::Ident) return;
      cur_.next();
      if (t.kind != Tok::Punct) continue;
      if (t.text == "{") ++depth;
      else if (t.text == "}") {
        if (depth <= 1) return;
        --depth;
      } else if (t.text == "(" || t.text == "[") {
        ++nest;
      } else if (t.text == ")" || t.text == "]") {
        if (nest > 0) --nest;
      } else if (t.text == ";" && depth == 0 && nest == 0) {
        return;
      }
    }
  }

  void check_invalid() {
    if (cur_.peek().kind == Tok::Invalid) cur_.fail(cur_.peek().text);
  }

  void declaration() {
    check_invalid();
    const Token& kw = cur_.peek();
    if (kw.kind != Tok::Ident) cur_.fail("expected a declaration but found " + describe(kw));
    if (kw.text == "actor" || kw.text == "component") {
      cur_.next();
      const Token& name = expect_name(cur_, kw.text + " name");
      cur_.expect_punct(";");
      auto& table = kw.text == "actor" ? result_.model.actors : result_.model.components;
      if (!table.emplace(name.text, AgentDecl{name.text, name.loc}).second) duplicate(name, kw.text);
    } else if (kw.text == "channel") {
      cur_.next();
      ChannelSignature sig = parse_signature(cur_);
      cur_.expect_punct(";");
      std::string name = sig.name;
      if (!result_.model.channels.emplace(name, std::move(sig)).second) {
        duplicate(Token{Tok::Ident, name, result_.model.channels.at(name).loc}, "channel");
      }
    } else if (kw.text == "interaction") {
      cur_.next();
      interaction();
    } else if (kw.text == "itg") {
      cur_.next();
      itg();
    } else if (kw.text == "def") {
      cur_.next();
      const Token& name = expect_name(cur_, "definition name");
      cur_.expect_punct("=");
      StateExpr body = parse_state_chain(cur_);
      cur_.expect_punct(";");
      Definition d{name.text, std::move(body), name.loc};
      if (!result_.model.definitions.emplace(name.text, std::move(d)).second) duplicate(name, "definition");
    } else {
      cur_.fail("expected a declaration (actor, component, channel, interaction, itg, def) but found " + describe(kw));
    }
  }

  void interaction() {
    const Token& id = expect_name(cur_, "interaction id");
    cur_.expect_punct("=");
    Interaction i;
    i.id = id.text;
    i.loc = id.loc;
    if (cur_.accept_punct(":")) {
      i.caller = {AgentKind::Component, expect_name(cur_, "component name").text};
    } else {
      i.caller = {AgentKind::Actor, expect_name(cur_, "actor name").text};
    }
    cur_.expect_punct("->");
    if (!cur_.accept_punct(":")) cur_.fail("callee must be a component, written ':Name'");
    i.callee = expect_name(cur_, "component name").text;
    cur_.expect_punct(".");
    i.channel = expect_name(cur_, "channel name").text;
    cur_.expect_punct(";");
    if (!result_.model.interactions.emplace(i.id, std::move(i)).second) duplicate(id, "interaction");
  }

  void itg() {
    const Token& name = expect_name(cur_, "itg name");
    Itg g;
    g.name = name.text;
    g.loc = name.loc;
    cur_.expect_punct("{");
    while (!cur_.is_punct("}")) {
      if (cur_.at_end()) cur_.fail("unterminated itg '" + g.name + "': expected '}'");
      std::size_t start = cur_.position();
      try {
        itg_item(g);
      } catch (const ParseError& e) {
        report(e);
        if (!skip_itg_item(start)) {
          commit_itg(std::move(g), name);
          return;
        }
      }
    }
    cur_.expect_punct("}");
    commit_itg(std::move(g), name);
  }

  // Skips past the ';' ending a broken transition line. Returns false when
  // the body runs into end of input or into what is evidently the next
  // top-level declaration (a missing '}').
  bool skip_itg_item(std::size_t start) {
    if (cur_.position() == start && !cur_.is_punct("}")) cur_.next();
    while (true) {
      const Token& t = cur_.peek();
      if (t.kind == Tok::End) return false;
      if (cur_.is_punct("}")) return true;
      if (starts_declaration(t) && cur_.peek(1).kind == Tok::Ident) return false;
      cur_.next();
      if (t.kind == Tok::Punct && t.text == ";") return true;
    }
  }

  void commit_itg(Itg g, const Token& name) {
    if (!result_.model.itgs.emplace(g.name, std::move(g)).second) duplicate(name, "itg");
  }

  void itg_item(Itg& g) {
    check_invalid();
    if (cur_.is_ident("init")) {
      const Token& kw = cur_.next();
      InitialTransition init;
      init.loc = kw.loc;
      if (cur_.accept_punct("[")) {
        init.snippet = parse_snippet(cur_);
        cur_.expect_punct("]");
      }
      cur_.expect_punct("->");
      init.state = expect_name(cur_, "initial state").text;
      cur_.expect_punct(";");
      g.states.insert(init.state);
      g.inits.push_back(std::move(init));
      return;
    }
    const Token& src = expect_name(cur_, "state name or 'init'");
    Transition t;
    t.source = src.text;
    t.loc = src.loc;
    cur_.expect_punct("-");
    t.prefix = parse_bracketed_prefix(cur_);
    cur_.expect_punct("->");
    if (!cur_.accept_ident(kStop)) t.target = expect_name(cur_, "target state or STOP").text;
    cur_.expect_punct(";");
    g.states.insert(t.source);
    if (t.target) g.states.insert(*t.target);
    g.transitions.push_back(std::move(t));
  }

  TokenCursor cur_;
  ParseResult result_;
  bool syntax_errors_ = false;
};

}  // namespace

ChannelSignature parse_channel_signature(std::string_view text) {
  auto toks = tokenize(text);
  for (const auto& t : toks) {
    if (t.kind == Tok::Invalid) throw ParseError(t.loc, t.text);
  }
  TokenCursor cur(std::move(toks));
  ChannelSignature sig = parse_signature(cur);
  cur.accept_punct(";");
  if (!cur.at_end()) cur.fail("unexpected " + describe(cur.peek()) + " after channel signature");
  return sig;
}

ParseResult parse_model(std::string_view text) { return ModelParser(text).run(); }

std::string print_itg(const Itg& g) {
  std::string out = "itg " + g.name + " {\n";
  for (const auto& init : g.inits) {
    out += "  init ";
    if (!init.snippet.empty()) out += "[" + to_string(init.snippet) + "] ";
    out += "-> " + init.state + ";\n";
  }
  for (const auto& t : g.transitions) {
    out += "  " + t.source + " -" + to_string(t.prefix) + "-> " + (t.target ? *t.target : std::string(kStop)) + ";\n";
  }
  out += "}\n";
  return out;
}

std::string print_model(const Model& m) {
  std::string out = "// sbc model\n";
  auto section = [&](bool nonempty) {
    if (nonempty) out += "\n";
  };
  section(!m.actors.empty());
  for (const auto& [name, _] : m.actors) out += "actor " + name + ";\n";
  section(!m.components.empty());
  for (const auto& [name, _] : m.components) out += "component " + name + ";\n";
  section(!m.channels.empty());
  for (const auto& [_, c] : m.channels) out += "channel " + to_string(c) + ";\n";
  section(!m.interactions.empty());
  for (const auto& [_, i] : m.interactions) {
    out += "interaction " + i.id + " = " + to_string(i.caller) + " -> :" + i.callee + " . " + i.channel + ";\n";
  }
  for (const auto& [_, g] : m.itgs) {
    out += "\n";
    out += print_itg(g);
  }
  section(!m.definitions.empty());
  for (const auto& [_, d] : m.definitions) out += "def " + d.name + " = " + to_string(d.body) + ";\n";
  return out;
}

}  // namespace sbc
