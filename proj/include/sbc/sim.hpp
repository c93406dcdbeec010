#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sbc/model.hpp"
#include "sbc/semantics.hpp"

namespace sbc {

using Bindings = std::vector<std::pair<std::string, Value>>;

// `step <Actor> <channel> [param=literal ...]`
struct ScenarioStep {
  std::string actor;
  std::string channel;
  Bindings bindings;
  SourceLoc loc;
};

// `stub <Component> <channel> [param=literal ...]`
struct Stub {
  std::string component;
  std::string channel;
  Bindings bindings;
  SourceLoc loc;
};

// Closes an open model: the actor requests to replay, and the values callee
// components hand back on out-parameters.
struct Scenario {
  std::vector<ScenarioStep> steps;
  std::vector<Stub> stubs;

  const Stub* find_stub(const std::string& component, const std::string& channel) const;
};

// Line-oriented `.scn` text. Throws ParseError.
Scenario parse_scenario(std::string_view text);
// Binding names must be declared parameters of the channel, with a
// compatible direction and type.
std::vector<Diagnostic> validate_scenario(const Scenario& scenario, const Model& model);

struct SimOptions {
  bool lenient_stubs = false;  // substitute type defaults for missing out values
};

struct SimState {
  Config config;
  std::size_t next_step = 0;  // scenario cursor
};

struct Candidate {
  Prefix prefix;  // as fired, snippet included
  NodePtr next;
  const Interaction* interaction = nullptr;
  Bindings inputs;  // values for in/inout parameters known before the handshake
  bool scripted = false;  // consumes the next scenario step
};

enum class TerminalStatus { Inactive, Deadlock, StepLimit };

std::string_view to_string(TerminalStatus s);

struct TraceStep {
  std::size_t index = 0;  // 1-based firing number
  std::string node_before;
  Prefix prefix;
  std::string caller;
  std::string callee;
  std::string channel;
  Bindings bindings;  // every parameter in declared order
  Env env_before;
  Env env_after;
};

struct Trace {
  CodeSnippet initial_snippet;
  Env initial_env;
  std::vector<TraceStep> steps;
  TerminalStatus status = TerminalStatus::Deadlock;
  std::string final_node;
  Env final_env;
};

// Resolves `constant`, builds its node and runs its entry snippet.
SimState start_state(const Model& model, const std::string& constant);
SimState start_state(const Instantiated& start);

// Structural successors whose guard holds and whose interaction is ready.
// With a scenario, a type-1 interaction is ready only when it matches the
// next step. Guard evaluation errors propagate as EvalError.
std::vector<Candidate> enabled(const SimState& state, const Model& model, const Scenario* scenario);

// Binds parameters, runs the snippet and advances the node.
std::pair<SimState, TraceStep> fire(const SimState& state, const Candidate& candidate, const Model& model,
                                    const Scenario* scenario, const SimOptions& options = {});

// Seeded uniform choice among enabled candidates until none is left or
// `max_steps` firings happened. Deterministic in its arguments.
Trace simulate(const Model& model, const std::string& constant, const Scenario* scenario, std::uint64_t seed,
               std::size_t max_steps, const SimOptions& options = {});
Trace simulate_from(const SimState& start, const Model& model, const Scenario* scenario, std::uint64_t seed,
                    std::size_t max_steps, const SimOptions& options = {});

// Fires the `index`-th enabled candidate. Throws SimulationError when the
// index is out of range or nothing is enabled.
std::pair<SimState, TraceStep> step_interactive(const SimState& state, std::size_t index, const Model& model,
                                                const Scenario* scenario, const SimOptions& options = {});

std::string format_step(const TraceStep& step);
std::string format_trace(const Trace& trace);

}  // namespace sbc
