#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "sbc/box.hpp"
#include "sbc/error.hpp"
#include "sbc/exprlang.hpp"

namespace sbc {

// Spelling of the inactive state in text formats.
inline constexpr std::string_view kStop = "STOP";

enum class Direction { In, Out, InOut };

std::string_view to_string(Direction d);

struct Parameter {
  Direction direction = Direction::In;
  std::string name;
  ValueType type = ValueType::String;

  bool is_input() const { return direction != Direction::Out; }
  bool is_output() const { return direction != Direction::In; }
  friend bool operator==(const Parameter&, const Parameter&) = default;
};

// "<direction> <name> : <type>"
std::string to_string(const Parameter& p);

struct ChannelSignature {
  std::string name;
  std::vector<Parameter> params;
  SourceLoc loc;

  const Parameter* find(std::string_view param) const;
  friend bool operator==(const ChannelSignature&, const ChannelSignature&) = default;
};

// "name(in a : String; out b : Real)"
std::string to_string(const ChannelSignature& sig);

enum class AgentKind { Actor, Component };

struct Agent {
  AgentKind kind = AgentKind::Actor;
  std::string name;

  friend bool operator==(const Agent&, const Agent&) = default;
};

// Actors print bare, components with a leading ':' as in ":ATM".
std::string to_string(const Agent& a);

// A handshake between a caller (actor or component) and a callee component
// over a channel. Type 1 when the caller is an actor, type 2 otherwise.
struct Interaction {
  std::string id;
  Agent caller;
  std::string channel;
  std::string callee;
  SourceLoc loc;

  bool is_type1() const { return caller.kind == AgentKind::Actor; }
  bool is_type2() const { return caller.kind == AgentKind::Component; }
  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// Transition label: guard, interaction (by id) and code snippet.
struct Prefix {
  Guard guard;
  std::string interaction;
  CodeSnippet snippet;
  SourceLoc loc;

  friend bool operator==(const Prefix&, const Prefix&) = default;
};

// "[guard ? id / snippet]" with nil parts omitted.
std::string to_string(const Prefix& p);

struct InitialTransition {
  CodeSnippet snippet;
  std::string state;
  SourceLoc loc;

  friend bool operator==(const InitialTransition&, const InitialTransition&) = default;
};

struct Transition {
  std::string source;
  Prefix prefix;
  std::optional<std::string> target;  // nullopt is the inactive state
  SourceLoc loc;

  bool to_inactive() const { return !target.has_value(); }
  friend bool operator==(const Transition&, const Transition&) = default;
};

// Interaction transition graph. A well-formed graph has exactly one entry in
// `inits`; the vector exists so that parsed input violating that can still be
// represented and diagnosed.
struct Itg {
  std::string name;
  std::set<std::string> states;
  std::vector<InitialTransition> inits;
  std::vector<Transition> transitions;
  SourceLoc loc;

  // Builds a graph whose state set is every state mentioned by the entry
  // and the transitions.
  static Itg make(std::string name, CodeSnippet initial_snippet, std::string initial_state,
                  std::vector<Transition> transitions);

  const std::string& initial_state() const;
  const CodeSnippet& initial_snippet() const;
  std::vector<const Transition*> outgoing(const std::string& state) const;

  friend bool operator==(const Itg&, const Itg&) = default;
};

struct StateExpr;

struct InactiveExpr {
  friend bool operator==(const InactiveExpr&, const InactiveExpr&) = default;
};
struct PrefixedExpr {
  Prefix prefix;
  Box<StateExpr> then;
  friend bool operator==(const PrefixedExpr&, const PrefixedExpr&) = default;
};
struct AltExpr {
  Box<StateExpr> left;
  Box<StateExpr> right;
  friend bool operator==(const AltExpr&, const AltExpr&) = default;
};
struct ParExpr {
  Box<StateExpr> left;
  Box<StateExpr> right;
  friend bool operator==(const ParExpr&, const ParExpr&) = default;
};
struct LoopExpr {
  std::string itg;
  friend bool operator==(const LoopExpr&, const LoopExpr&) = default;
};
struct RefExpr {
  std::string name;
  friend bool operator==(const RefExpr&, const RefExpr&) = default;
};

struct StateExpr {
  std::variant<InactiveExpr, PrefixedExpr, AltExpr, ParExpr, LoopExpr, RefExpr> node;
  friend bool operator==(const StateExpr&, const StateExpr&) = default;
};

StateExpr make_inactive();
StateExpr make_prefixed(Prefix prefix, StateExpr then);
StateExpr make_alt(StateExpr left, StateExpr right);
StateExpr make_par(StateExpr left, StateExpr right);
StateExpr make_loop(std::string itg);
StateExpr make_ref(std::string name);

// Canonical text, fully parenthesized: "((ref a par ref b) alt STOP)".
std::string to_string(const StateExpr& e);

struct Definition {
  std::string name;
  StateExpr body;
  SourceLoc loc;

  friend bool operator==(const Definition&, const Definition&) = default;
};

struct AgentDecl {
  std::string name;
  SourceLoc loc;

  friend bool operator==(const AgentDecl&, const AgentDecl&) = default;
};

struct Model {
  std::map<std::string, AgentDecl> actors;
  std::map<std::string, AgentDecl> components;
  std::map<std::string, ChannelSignature> channels;
  std::map<std::string, Interaction> interactions;
  std::map<std::string, Itg> itgs;
  std::map<std::string, Definition> definitions;

  const Interaction* find_interaction(const std::string& id) const;
  const ChannelSignature* find_channel(const std::string& name) const;
  const Itg* find_itg(const std::string& name) const;
  const Definition* find_definition(const std::string& name) const;

  // Throws ReferenceError when the interaction or its channel is unknown.
  const Interaction& interaction(const std::string& id) const;
  const ChannelSignature& channel_of(const Interaction& i) const;

  friend bool operator==(const Model&, const Model&) = default;
};

// Normalizes absent guard / snippet to TRUE / empty. Throws ReferenceError
// when the interaction id is not declared in `model`.
Prefix make_prefix(const std::optional<Guard>& guard, const std::string& interaction,
                   const std::optional<CodeSnippet>& snippet, const Model& model);

// Cross-reference and well-formedness checks over a whole model. Returns an
// empty list iff every structural invariant holds; warnings are included.
std::vector<Diagnostic> validate_model(const Model& model);

// Just the unresolved-reference subset of validate_model.
std::vector<Diagnostic> check_references(const Model& model);

// Structural checks on one graph (entry count, declared states, interaction
// references when `model` is given).
std::vector<Diagnostic> validate_itg(const Itg& itg, const Model* model = nullptr);

}  // namespace sbc
