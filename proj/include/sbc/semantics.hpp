#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sbc/model.hpp"

namespace sbc {

// Runtime state of a resolved state expression. Nodes are immutable and
// shared; the par/alt structure mirrors the expression they came from.
class Node;
using NodePtr = std::shared_ptr<const Node>;

enum class NodeKind {
  Stop,  // the inactive state
  Leaf,  // a state of a named graph (or its inactive state)
  Seq,   // "[prefix] . e" before its prefix has fired
  Alt,   // choice not yet committed
  Par,   // interleaving
};

class Node {
public:
  static NodePtr stop();
  static NodePtr leaf(std::string itg, std::optional<std::string> state);
  static NodePtr seq(Prefix prefix, StateExpr continuation);
  static NodePtr alt(NodePtr left, NodePtr right);
  static NodePtr par(NodePtr left, NodePtr right);

  NodeKind kind() const { return kind_; }
  const std::string& itg() const { return itg_; }
  const std::optional<std::string>& state() const { return state_; }
  const Prefix& prefix() const { return prefix_; }
  const StateExpr& continuation() const { return continuation_; }
  const NodePtr& left() const { return left_; }
  const NodePtr& right() const { return right_; }

  // Unique structural identity (graph names included).
  const std::string& key() const { return key_; }
  // Human-readable name, e.g. "s52 par STOP".
  std::string display() const;

  // The atomic inactive state: Stop or a leaf sitting on STOP.
  bool is_stop() const;
  // No part of the node can ever move again (every leaf is on STOP).
  bool all_inactive() const;

private:
  Node() = default;
  std::string display(bool nested) const;

  NodeKind kind_ = NodeKind::Stop;
  std::string itg_;
  std::optional<std::string> state_;
  Prefix prefix_;
  StateExpr continuation_;
  NodePtr left_;
  NodePtr right_;
  std::string key_;
};

// A runtime node together with the variable environment.
struct Config {
  NodePtr node;
  Env env;
};

struct Instantiated {
  NodePtr node;
  CodeSnippet initial_snippet;  // concatenation of the entry snippets it absorbs
};

// Returns `name`'s definition with every reference to another definition
// inlined. References to graphs stay as `ref`/`loop` leaves. Throws
// ReferenceError for an undeclared name or a cycle among definitions.
StateExpr resolve_refs(const Model& model, const std::string& name);
StateExpr resolve_expr(const Model& model, const StateExpr& expr);

// Builds the runtime node for a resolved expression.
Instantiated instantiate(const Model& model, const StateExpr& resolved);

struct Successor {
  Prefix prefix;
  NodePtr next;
};

// One-step structural successors; guards are not evaluated. Parallel
// children interleave (left first), alternatives offer both branches and
// commit, prefixed expressions fire their prefix with the continuation's
// entry snippet appended.
std::vector<Successor> successors(const Node& node, const Model& model);

// Graph-level composition rules.

// The state "[prefix] . target" as a new graph rooted at `new_state`.
// Throws SbcError if `new_state` is already a state of `target`.
Itg compose_sequence(const Prefix& prefix, const Itg& target, const std::string& new_state);

// "(left alt right)" rooted at `new_state`. Right-hand states that clash
// with left-hand ones are renamed with a "#k" suffix; original entry states
// are kept only while still reachable.
Itg compose_alternative(const Itg& left, const Itg& right, const std::string& new_state);

using PairNamer =
    std::function<std::string(const std::optional<std::string>& left, const std::optional<std::string>& right)>;

// "u par v", with STOP for the inactive side.
std::string default_pair_name(const std::optional<std::string>& left, const std::optional<std::string>& right);

// Reachable part of the interleaving product. Every product pair, including
// (STOP, STOP), is a named state.
Itg compose_parallel_expand(const Itg& left, const Itg& right, const PairNamer& namer = default_pair_name);

struct ExpandOptions {
  std::size_t max_states = 100000;
};

// Explores a definition (or a graph) on the fly into an explicit graph. A
// composite entry node takes the definition's name; other states are named
// by Node::display. Throws StateSpaceError past `max_states`.
Itg expand(const Model& model, const std::string& name, const ExpandOptions& options = {});
Itg expand_node(const Model& model, const Instantiated& start, const std::string& name,
                const ExpandOptions& options = {});

struct Derivative {
  std::vector<Prefix> trace;
  std::optional<std::string> end;  // nullopt is the inactive state

  friend bool operator==(const Derivative&, const Derivative&) = default;
};

// All (trace, end) pairs with 1 <= |trace| <= max_depth reachable from
// `from`, without duplicates, in depth-first discovery order.
std::vector<Derivative> derivatives(const Itg& itg, const std::optional<std::string>& from, std::size_t max_depth);

// True iff the initial state lies on a directed cycle.
bool is_loop(const Itg& itg);

// Renames states; names missing from the map are kept.
Itg rename_states(const Itg& itg, const std::function<std::string(const std::string&)>& rename);

}  // namespace sbc
