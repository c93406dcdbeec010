#include "sbc/model.hpp"

#include <algorithm>
#include <functional>

#include "sbc/semantics.hpp"

namespace sbc {

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::In: return "in";
    case Direction::Out: return "out";
    case Direction::InOut: return "inout";
  }
  return "?";
}

std::string to_string(const Parameter& p) {
  return std::string(to_string(p.direction)) + " " + p.name + " : " + std::string(to_string(p.type));
}

const Parameter* ChannelSignature::find(std::string_view param) const {
  for (const auto& p : params) {
    if (p.name == param) return &p;
  }
  return nullptr;
}

std::string to_string(const ChannelSignature& sig) {
  std::string out = sig.name + "(";
  for (std::size_t i = 0; i < sig.params.size(); ++i) {
    if (i) out += "; ";
    out += to_string(sig.params[i]);
  }
  return out + ")";
}

std::string to_string(const Agent& a) {
  return a.kind == AgentKind::Component ? ":" + a.name : a.name;
}

std::string to_string(const Prefix& p) {
  std::string out = "[";
  if (!p.guard.is_true()) out += to_string(p.guard) + " ? ";
  out += p.interaction;
  if (!p.snippet.empty()) out += " / " + to_string(p.snippet);
  return out + "]";
}

Itg Itg::make(std::string name, CodeSnippet initial_snippet, std::string initial_state,
              std::vector<Transition> transitions) {
  Itg g;
  g.name = std::move(name);
  g.states.insert(initial_state);
  for (const auto& t : transitions) {
    g.states.insert(t.source);
    if (t.target) g.states.insert(*t.target);
  }
  g.inits.push_back({std::move(initial_snippet), std::move(initial_state), {}});
  g.transitions = std::move(transitions);
  return g;
}

const std::string& Itg::initial_state() const {
  if (inits.empty()) throw SbcError("itg '" + name + "' has no initial transition");
  return inits.front().state;
}

const CodeSnippet& Itg::initial_snippet() const {
  if (inits.empty()) throw SbcError("itg '" + name + "' has no initial transition");
  return inits.front().snippet;
}

std::vector<const Transition*> Itg::outgoing(const std::string& state) const {
  std::vector<const Transition*> out;
  for (const auto& t : transitions) {
    if (t.source == state) out.push_back(&t);
  }
  return out;
}

StateExpr make_inactive() { return StateExpr{InactiveExpr{}}; }
StateExpr make_prefixed(Prefix prefix, StateExpr then) {
  return StateExpr{PrefixedExpr{std::move(prefix), Box<StateExpr>(std::move(then))}};
}
StateExpr make_alt(StateExpr left, StateExpr right) {
  return StateExpr{AltExpr{Box<StateExpr>(std::move(left)), Box<StateExpr>(std::move(right))}};
}
StateExpr make_par(StateExpr left, StateExpr right) {
  return StateExpr{ParExpr{Box<StateExpr>(std::move(left)), Box<StateExpr>(std::move(right))}};
}
StateExpr make_loop(std::string itg) { return StateExpr{LoopExpr{std::move(itg)}}; }
StateExpr make_ref(std::string name) { return StateExpr{RefExpr{std::move(name)}}; }

std::string to_string(const StateExpr& e) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, InactiveExpr>) {
          return std::string(kStop);
        } else if constexpr (std::is_same_v<T, PrefixedExpr>) {
          return to_string(n.prefix) + " . " + to_string(*n.then);
        } else if constexpr (std::is_same_v<T, AltExpr>) {
          return "(" + to_string(*n.left) + " alt " + to_string(*n.right) + ")";
        } else if constexpr (std::is_same_v<T, ParExpr>) {
          return "(" + to_string(*n.left) + " par " + to_string(*n.right) + ")";
        } else if constexpr (std::is_same_v<T, LoopExpr>) {
          return "loop " + n.itg;
        } else {
          return "ref " + n.name;
        }
      },
      e.node);
}

const Interaction* Model::find_interaction(const std::string& id) const {
  auto it = interactions.find(id);
  return it == interactions.end() ? nullptr : &it->second;
}
const ChannelSignature* Model::find_channel(const std::string& name) const {
  auto it = channels.find(name);
  return it == channels.end() ? nullptr : &it->second;
}
const Itg* Model::find_itg(const std::string& name) const {
  auto it = itgs.find(name);
  return it == itgs.end() ? nullptr : &it->second;
}
const Definition* Model::find_definition(const std::string& name) const {
  auto it = definitions.find(name);
  return it == definitions.end() ? nullptr : &it->second;
}

const Interaction& Model::interaction(const std::string& id) const {
  const auto* i = find_interaction(id);
  if (!i) throw ReferenceError("undeclared interaction '" + id + "'");
  return *i;
}

const ChannelSignature& Model::channel_of(const Interaction& i) const {
  const auto* c = find_channel(i.channel);
  if (!c) throw ReferenceError("interaction '" + i.id + "' uses undeclared channel '" + i.channel + "'");
  return *c;
}

Prefix make_prefix(const std::optional<Guard>& guard, const std::string& interaction,
                   const std::optional<CodeSnippet>& snippet, const Model& model) {
  if (!model.find_interaction(interaction)) {
    throw ReferenceError("undeclared interaction '" + interaction + "'");
  }
  Prefix p;
  p.guard = guard.value_or(Guard{});
  p.interaction = interaction;
  p.snippet = snippet.value_or(CodeSnippet{});
  return p;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Collector {
public:
  explicit Collector(std::vector<Diagnostic>& out) : out_(out) {}

  void error(SourceLoc loc, std::string rule, std::string message) {
    out_.push_back({loc, Severity::Error, std::move(rule), std::move(message)});
  }
  void warning(SourceLoc loc, std::string rule, std::string message) {
    out_.push_back({loc, Severity::Warning, std::move(rule), std::move(message)});
  }

private:
  std::vector<Diagnostic>& out_;
};

void check_prefix_reference(const Prefix& p, const Model& model, const std::string& where, Collector& c) {
  if (!model.find_interaction(p.interaction)) {
    c.error(p.loc, "unresolved-interaction", where + " uses undeclared interaction '" + p.interaction + "'");
  }
}

void check_interaction(const Interaction& i, const Model& model, Collector& c) {
  if (!model.find_channel(i.channel)) {
    c.error(i.loc, "unresolved-channel", "interaction '" + i.id + "' uses undeclared channel '" + i.channel + "'");
  }
  if (i.caller.kind == AgentKind::Actor) {
    if (!model.actors.count(i.caller.name)) {
      std::string hint = model.components.count(i.caller.name) ? " (it is a component; write ':" + i.caller.name + "')" : "";
      c.error(i.loc, "unresolved-caller", "interaction '" + i.id + "' has undeclared actor '" + i.caller.name + "'" + hint);
    }
  } else if (!model.components.count(i.caller.name)) {
    c.error(i.loc, "unresolved-caller", "interaction '" + i.id + "' has undeclared component ':" + i.caller.name + "'");
  }
  if (!model.components.count(i.callee)) {
    c.error(i.loc, "unresolved-callee", "interaction '" + i.id + "' has undeclared callee component ':" + i.callee + "'");
  }
}

void visit_prefixes(const StateExpr& e, const std::function<void(const Prefix&)>& f) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PrefixedExpr>) {
          f(n.prefix);
          visit_prefixes(*n.then, f);
        } else if constexpr (std::is_same_v<T, AltExpr> || std::is_same_v<T, ParExpr>) {
          visit_prefixes(*n.left, f);
          visit_prefixes(*n.right, f);
        }
      },
      e.node);
}

void check_expr_refs(const StateExpr& e, const Model& model, const Definition& def, Collector& c) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PrefixedExpr>) {
          check_prefix_reference(n.prefix, model, "definition '" + def.name + "'", c);
          check_expr_refs(*n.then, model, def, c);
        } else if constexpr (std::is_same_v<T, AltExpr> || std::is_same_v<T, ParExpr>) {
          check_expr_refs(*n.left, model, def, c);
          check_expr_refs(*n.right, model, def, c);
        } else if constexpr (std::is_same_v<T, LoopExpr>) {
          if (!model.find_itg(n.itg)) {
            c.error(def.loc, "unresolved-reference", "definition '" + def.name + "': loop over undeclared itg '" + n.itg + "'");
          }
        } else if constexpr (std::is_same_v<T, RefExpr>) {
          if (!model.find_itg(n.name) && !model.find_definition(n.name)) {
            c.error(def.loc, "unresolved-reference", "definition '" + def.name + "' references undeclared '" + n.name + "'");
          }
        }
      },
      e.node);
}

void collect_def_refs(const StateExpr& e, const Model& model, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PrefixedExpr>) {
          collect_def_refs(*n.then, model, out);
        } else if constexpr (std::is_same_v<T, AltExpr> || std::is_same_v<T, ParExpr>) {
          collect_def_refs(*n.left, model, out);
          collect_def_refs(*n.right, model, out);
        } else if constexpr (std::is_same_v<T, RefExpr>) {
          if (model.find_definition(n.name)) out.push_back(n.name);
        }
      },
      e.node);
}

void collect_loops(const StateExpr& e, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PrefixedExpr>) {
          collect_loops(*n.then, out);
        } else if constexpr (std::is_same_v<T, AltExpr> || std::is_same_v<T, ParExpr>) {
          collect_loops(*n.left, out);
          collect_loops(*n.right, out);
        } else if constexpr (std::is_same_v<T, LoopExpr>) {
          out.push_back(n.itg);
        }
      },
      e.node);
}

void references_into(const Model& model, Collector& c) {
  for (const auto& [_, i] : model.interactions) check_interaction(i, model, c);
  for (const auto& [_, g] : model.itgs) {
    for (const auto& t : g.transitions) {
      check_prefix_reference(t.prefix, model, "itg '" + g.name + "' transition from '" + t.source + "'", c);
    }
  }
  for (const auto& [_, d] : model.definitions) check_expr_refs(d.body, model, d, c);
}

}  // namespace

std::vector<Diagnostic> check_references(const Model& model) {
  std::vector<Diagnostic> out;
  Collector c(out);
  references_into(model, c);
  return out;
}

std::vector<Diagnostic> validate_itg(const Itg& g, const Model* model) {
  std::vector<Diagnostic> out;
  Collector c(out);
  if (g.inits.empty()) {
    c.error(g.loc, "single-initial", "itg '" + g.name + "' has no initial transition");
  } else if (g.inits.size() > 1) {
    c.error(g.inits[1].loc, "single-initial",
            "itg '" + g.name + "' has " + std::to_string(g.inits.size()) + " initial transitions; exactly one is allowed");
  }
  for (const auto& init : g.inits) {
    if (!g.states.count(init.state)) {
      c.error(init.loc, "undeclared-state", "itg '" + g.name + "' initial state '" + init.state + "' is not declared");
    }
  }
  for (const auto& t : g.transitions) {
    if (!g.states.count(t.source)) {
      c.error(t.loc, "undeclared-state", "itg '" + g.name + "' transition source '" + t.source + "' is not declared");
    }
    if (t.target && !g.states.count(*t.target)) {
      c.error(t.loc, "undeclared-state", "itg '" + g.name + "' transition target '" + *t.target + "' is not declared");
    }
    if (model) check_prefix_reference(t.prefix, *model, "itg '" + g.name + "' transition from '" + t.source + "'", c);
  }
  return out;
}

std::vector<Diagnostic> validate_model(const Model& model) {
  std::vector<Diagnostic> out;
  Collector c(out);

  for (const auto& [name, decl] : model.actors) {
    if (model.components.count(name)) {
      c.error(decl.loc, "agent-names-disjoint", "'" + name + "' is declared both as actor and as component");
    }
  }

  for (const auto& [_, ch] : model.channels) {
    std::set<std::string> seen;
    for (const auto& p : ch.params) {
      if (!seen.insert(p.name).second) {
        c.error(ch.loc, "duplicate-parameter", "channel '" + ch.name + "' repeats parameter '" + p.name + "'");
      }
    }
  }

  references_into(model, c);

  for (const auto& [_, g] : model.itgs) {
    auto diags = validate_itg(g, nullptr);
    out.insert(out.end(), diags.begin(), diags.end());
    if (model.definitions.count(g.name)) {
      c.error(g.loc, "name-clash", "'" + g.name + "' names both an itg and a definition");
    }
  }

  // Every variable a guard or snippet reads must be produced somewhere:
  // by some snippet assignment or as a channel parameter.
  std::set<std::string> known;
  for (const auto& [_, ch] : model.channels) {
    for (const auto& p : ch.params) known.insert(p.name);
  }
  auto learn = [&](const CodeSnippet& s) {
    auto w = variables_written(s);
    known.insert(w.begin(), w.end());
  };
  for (const auto& [_, g] : model.itgs) {
    for (const auto& init : g.inits) learn(init.snippet);
    for (const auto& t : g.transitions) learn(t.prefix.snippet);
  }
  for (const auto& [_, d] : model.definitions) visit_prefixes(d.body, [&](const Prefix& p) { learn(p.snippet); });

  auto check_reads = [&](const Prefix& p, const std::string& where) {
    for (const auto& v : variables_read(p.guard)) {
      if (!known.count(v)) c.error(p.loc, "unbound-variable", where + ": guard reads '" + v + "', which nothing assigns");
    }
    for (const auto& v : variables_read(p.snippet)) {
      if (!known.count(v)) c.error(p.loc, "unbound-variable", where + ": snippet reads '" + v + "', which nothing assigns");
    }
  };
  for (const auto& [_, g] : model.itgs) {
    for (const auto& init : g.inits) {
      for (const auto& v : variables_read(init.snippet)) {
        if (!known.count(v)) c.error(init.loc, "unbound-variable", "itg '" + g.name + "' initial snippet reads '" + v + "', which nothing assigns");
      }
    }
    for (const auto& t : g.transitions) check_reads(t.prefix, "itg '" + g.name + "' transition from '" + t.source + "'");
  }
  for (const auto& [_, d] : model.definitions) {
    visit_prefixes(d.body, [&](const Prefix& p) { check_reads(p, "definition '" + d.name + "'"); });
  }

  // Definitions may only bottom out in graphs; any cycle among them is textual.
  std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
  std::function<void(const Definition&)> dfs = [&](const Definition& d) {
    color[d.name] = 1;
    std::vector<std::string> refs;
    collect_def_refs(d.body, model, refs);
    for (const auto& r : refs) {
      if (color[r] == 1) {
        c.error(d.loc, "definition-cycle", "definition '" + d.name + "' refers back to '" + r + "' without passing through an itg");
      } else if (color[r] == 0) {
        dfs(*model.find_definition(r));
      }
    }
    color[d.name] = 2;
  };
  for (const auto& [name, d] : model.definitions) {
    if (color[name] == 0) dfs(d);
  }

  for (const auto& [_, d] : model.definitions) {
    std::vector<std::string> loops;
    collect_loops(d.body, loops);
    for (const auto& name : loops) {
      const Itg* g = model.find_itg(name);
      if (g && g->inits.size() == 1 && !is_loop(*g)) {
        c.warning(d.loc, "loop-not-cyclic", "definition '" + d.name + "': 'loop " + name + "' but its initial state lies on no cycle");
      }
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::pair(a.loc.line, a.loc.column) < std::pair(b.loc.line, b.loc.column);
  });
  return out;
}

}  // namespace sbc
