#include "sbc/sim.hpp"

#include <random>
#include <sstream>

namespace sbc {

std::string_view to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::Inactive: return "inactive";
    case TerminalStatus::Deadlock: return "deadlock";
    case TerminalStatus::StepLimit: return "step-limit";
  }
  return "?";
}

const Stub* Scenario::find_stub(const std::string& component, const std::string& channel) const {
  const Stub* found = nullptr;
  for (const auto& s : stubs) {
    if (s.component == component && s.channel == channel) found = &s;
  }
  return found;
}

namespace {

Value literal_at(TokenCursor& cur) {
  bool negative = cur.accept_punct("-");
  const Token& t = cur.next();
  std::string spelled;
  switch (t.kind) {
    case Tok::Integer:
    case Tok::Real: spelled = (negative ? "-" : "") + t.text; break;
    case Tok::String:
      if (negative) cur.fail_at(t, "cannot negate a string");
      return t.text;
    case Tok::Ident:
      if (!negative && (t.text == "true" || t.text == "false")) return t.text == "true";
      [[fallthrough]];
    default: cur.fail_at(t, "expected a literal value but found " + describe(t));
  }
  try {
    return parse_literal(spelled);
  } catch (const ParseError& e) {
    throw ParseError(t.loc, e.what());
  }
}

const Value* lookup(const Bindings& b, const std::string& name) {
  for (const auto& [k, v] : b) {
    if (k == name) return &v;
  }
  return nullptr;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  std::string normalized = normalize_newlines(text);
  std::istringstream lines(normalized);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto toks = tokenize(line);
    for (auto& t : toks) {
      t.loc.line = lineno;
      if (t.kind == Tok::Invalid) throw ParseError(t.loc, t.text);
    }
    TokenCursor cur(std::move(toks));
    if (cur.at_end()) continue;
    const Token& kw = cur.expect_ident("'step' or 'stub'");
    if (kw.text != "step" && kw.text != "stub") cur.fail_at(kw, "expected 'step' or 'stub' but found '" + kw.text + "'");
    std::string agent = cur.expect_ident(kw.text == "step" ? "actor name" : "component name").text;
    std::string channel = cur.expect_ident("channel name").text;
    Bindings bindings;
    while (!cur.at_end()) {
      const Token& name = cur.expect_ident("parameter name");
      cur.expect_punct("=");
      if (lookup(bindings, name.text)) cur.fail_at(name, "parameter '" + name.text + "' bound twice");
      bindings.emplace_back(name.text, literal_at(cur));
    }
    if (kw.text == "step") {
      sc.steps.push_back({agent, channel, std::move(bindings), kw.loc});
    } else {
      sc.stubs.push_back({agent, channel, std::move(bindings), kw.loc});
    }
  }
  return sc;
}

std::vector<Diagnostic> validate_scenario(const Scenario& sc, const Model& model) {
  std::vector<Diagnostic> out;
  auto error = [&](SourceLoc loc, std::string rule, std::string msg) {
    out.push_back({loc, Severity::Error, std::move(rule), std::move(msg)});
  };
  auto check_bindings = [&](const Bindings& b, const ChannelSignature& ch, bool inputs, SourceLoc loc) {
    for (const auto& [name, value] : b) {
      const Parameter* p = ch.find(name);
      if (!p) {
        error(loc, "scenario-binding", "channel '" + ch.name + "' has no parameter '" + name + "'");
      } else if (inputs ? !p->is_input() : !p->is_output()) {
        error(loc, "scenario-binding", "parameter '" + name + "' of '" + ch.name + "' is '" +
                                           std::string(to_string(p->direction)) + "', cannot be bound by a " +
                                           (inputs ? "step" : "stub"));
      } else if (!compatible(value, p->type)) {
        error(loc, "scenario-binding", "parameter '" + name + "' of '" + ch.name + "' expects " +
                                           std::string(to_string(p->type)) + ", got " + to_string(value));
      }
    }
  };
  for (const auto& s : sc.steps) {
    if (!model.actors.count(s.actor)) error(s.loc, "scenario-reference", "undeclared actor '" + s.actor + "'");
    const ChannelSignature* ch = model.find_channel(s.channel);
    if (!ch) {
      error(s.loc, "scenario-reference", "undeclared channel '" + s.channel + "'");
      continue;
    }
    check_bindings(s.bindings, *ch, true, s.loc);
  }
  for (std::size_t i = 0; i < sc.stubs.size(); ++i) {
    const auto& s = sc.stubs[i];
    if (!model.components.count(s.component)) {
      error(s.loc, "scenario-reference", "undeclared component '" + s.component + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (sc.stubs[j].component == s.component && sc.stubs[j].channel == s.channel) {
        error(s.loc, "duplicate-stub", "second stub for " + s.component + "." + s.channel);
      }
    }
    const ChannelSignature* ch = model.find_channel(s.channel);
    if (!ch) {
      error(s.loc, "scenario-reference", "undeclared channel '" + s.channel + "'");
      continue;
    }
    check_bindings(s.bindings, *ch, false, s.loc);
  }
  return out;
}

SimState start_state(const Instantiated& start) {
  SimState st;
  st.config.node = start.node;
  st.config.env = exec_snippet(start.initial_snippet, {});
  return st;
}

SimState start_state(const Model& model, const std::string& constant) {
  return start_state(instantiate(model, resolve_refs(model, constant)));
}

std::vector<Candidate> enabled(const SimState& state, const Model& model, const Scenario* scenario) {
  std::vector<Candidate> out;
  const Env& env = state.config.env;
  for (auto& s : successors(*state.config.node, model)) {
    const Interaction& inter = model.interaction(s.prefix.interaction);
    const ChannelSignature& ch = model.channel_of(inter);
    Candidate c;
    c.interaction = &inter;
    const ScenarioStep* step = nullptr;
    if (scenario && inter.is_type1()) {
      if (state.next_step >= scenario->steps.size()) continue;
      step = &scenario->steps[state.next_step];
      if (step->actor != inter.caller.name || step->channel != inter.channel) continue;
      c.scripted = true;
    }
    Env guard_env = env;
    for (const auto& p : ch.params) {
      if (!p.is_input()) continue;
      const Value* v = step ? lookup(step->bindings, p.name) : nullptr;
      if (!v) {
        auto it = env.find(p.name);
        if (it != env.end()) v = &it->second;
      }
      if (v) {
        c.inputs.emplace_back(p.name, coerce(*v, p.type));
        guard_env[p.name] = coerce(*v, p.type);
      }
    }
    bool ok = false;
    try {
      ok = eval_guard(s.prefix.guard, guard_env);
    } catch (const EvalError& e) {
      std::string where = s.prefix.loc.known() ? " at " + to_string(s.prefix.loc) : "";
      throw EvalError("guard '" + to_string(s.prefix.guard) + "' of " + inter.id + where + ": " + e.what());
    }
    if (!ok) continue;
    c.prefix = std::move(s.prefix);
    c.next = std::move(s.next);
    out.push_back(std::move(c));
  }
  return out;
}

std::pair<SimState, TraceStep> fire(const SimState& state, const Candidate& c, const Model& model,
                                    const Scenario* scenario, const SimOptions& options) {
  const Interaction& inter = *c.interaction;
  const ChannelSignature& ch = model.channel_of(inter);
  const Stub* stub = scenario ? scenario->find_stub(inter.callee, inter.channel) : nullptr;

  TraceStep step;
  step.node_before = state.config.node->display();
  step.prefix = c.prefix;
  step.caller = to_string(inter.caller);
  step.callee = ":" + inter.callee;
  step.channel = inter.channel;
  step.env_before = state.config.env;

  Env env = state.config.env;
  for (const auto& p : ch.params) {
    std::optional<Value> value;
    if (p.is_input()) {
      if (const Value* v = lookup(c.inputs, p.name)) value = *v;
    }
    if (p.is_output()) {
      if (const Value* v = stub ? lookup(stub->bindings, p.name) : nullptr) value = *v;
    }
    if (!value) {
      if (!options.lenient_stubs) {
        std::string what = p.direction == Direction::In ? "in-parameter" : "out-parameter";
        throw SimulationError("no value for " + what + " '" + p.name + "' of " + inter.id + " (" + step.caller +
                              " -> " + step.callee + " . " + inter.channel + ")" +
                              (p.is_output() ? "; add: stub " + inter.callee + " " + inter.channel + " " + p.name + "=..." : ""));
      }
      value = default_value(p.type);
    }
    if (!compatible(*value, p.type)) {
      throw SimulationError("parameter '" + p.name + "' of " + inter.channel + " expects " +
                            std::string(to_string(p.type)) + ", got " + to_string(*value));
    }
    Value v = coerce(*value, p.type);
    env[p.name] = v;
    step.bindings.emplace_back(p.name, std::move(v));
  }
  try {
    env = exec_snippet(c.prefix.snippet, env);
  } catch (const EvalError& e) {
    throw EvalError("snippet '" + to_string(c.prefix.snippet) + "' of " + inter.id + ": " + e.what());
  }

  SimState next;
  next.config.node = c.next;
  next.config.env = env;
  next.next_step = state.next_step + (c.scripted ? 1 : 0);
  step.env_after = std::move(env);
  return {std::move(next), std::move(step)};
}

Trace simulate_from(const SimState& start, const Model& model, const Scenario* scenario, std::uint64_t seed,
                    std::size_t max_steps, const SimOptions& options) {
  Trace trace;
  trace.initial_env = start.config.env;
  std::mt19937_64 rng(seed);
  SimState state = start;
  while (true) {
    auto candidates = enabled(state, model, scenario);
    if (candidates.empty()) {
      trace.status = state.config.node->all_inactive() ? TerminalStatus::Inactive : TerminalStatus::Deadlock;
      break;
    }
    if (trace.steps.size() >= max_steps) {
      trace.status = TerminalStatus::StepLimit;
      break;
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    auto [next, step] = fire(state, candidates[pick(rng)], model, scenario, options);
    step.index = trace.steps.size() + 1;
    trace.steps.push_back(std::move(step));
    state = std::move(next);
  }
  trace.final_node = state.config.node->display();
  trace.final_env = state.config.env;
  return trace;
}

Trace simulate(const Model& model, const std::string& constant, const Scenario* scenario, std::uint64_t seed,
               std::size_t max_steps, const SimOptions& options) {
  Instantiated start = instantiate(model, resolve_refs(model, constant));
  Trace t = simulate_from(start_state(start), model, scenario, seed, max_steps, options);
  t.initial_snippet = start.initial_snippet;
  return t;
}

std::pair<SimState, TraceStep> step_interactive(const SimState& state, std::size_t index, const Model& model,
                                                const Scenario* scenario, const SimOptions& options) {
  auto candidates = enabled(state, model, scenario);
  if (candidates.empty()) throw SimulationError("no enabled transitions");
  if (index >= candidates.size()) {
    throw SimulationError("choice " + std::to_string(index) + " out of range (0.." +
                          std::to_string(candidates.size() - 1) + ")");
  }
  return fire(state, candidates[index], model, scenario, options);
}

std::string format_step(const TraceStep& s) {
  std::string args;
  for (const auto& [name, value] : s.bindings) {
    if (!args.empty()) args += ", ";
    args += name + "=" + to_string(value);
  }
  return std::to_string(s.index) + " " + s.caller + " -> " + s.callee + " . " + s.channel + "(" + args + ") [" +
         to_string(s.prefix.guard) + "] {" + to_string(s.prefix.snippet) + "} | env: " + to_string(s.env_after);
}

std::string format_trace(const Trace& t) {
  std::string out = "# init {" + to_string(t.initial_snippet) + "} | env: " + to_string(t.initial_env) + "\n";
  for (const auto& s : t.steps) out += format_step(s) + "\n";
  out += "# status: " + std::string(to_string(t.status)) + " at " + t.final_node + " after " +
         std::to_string(t.steps.size()) + (t.steps.size() == 1 ? " firing\n" : " firings\n");
  return out;
}

}  // namespace sbc
