#include "sbc/semantics.hpp"

#include <array>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace sbc {

NodePtr Node::stop() {
  auto n = std::shared_ptr<Node>(new Node());
  n->kind_ = NodeKind::Stop;
  n->key_ = std::string(kStop);
  return n;
}

NodePtr Node::leaf(std::string itg, std::optional<std::string> state) {
  auto n = std::shared_ptr<Node>(new Node());
  n->kind_ = NodeKind::Leaf;
  n->key_ = itg + ":" + (state ? *state : std::string(kStop));
  n->itg_ = std::move(itg);
  n->state_ = std::move(state);
  return n;
}

NodePtr Node::seq(Prefix prefix, StateExpr continuation) {
  auto n = std::shared_ptr<Node>(new Node());
  n->kind_ = NodeKind::Seq;
  n->key_ = to_string(prefix) + " . " + to_string(continuation);
  n->prefix_ = std::move(prefix);
  n->continuation_ = std::move(continuation);
  return n;
}

NodePtr Node::alt(NodePtr left, NodePtr right) {
  auto n = std::shared_ptr<Node>(new Node());
  n->kind_ = NodeKind::Alt;
  n->key_ = "(" + left->key() + " alt " + right->key() + ")";
  n->left_ = std::move(left);
  n->right_ = std::move(right);
  return n;
}

NodePtr Node::par(NodePtr left, NodePtr right) {
  auto n = std::shared_ptr<Node>(new Node());
  n->kind_ = NodeKind::Par;
  n->key_ = "(" + left->key() + " par " + right->key() + ")";
  n->left_ = std::move(left);
  n->right_ = std::move(right);
  return n;
}

std::string Node::display() const { return display(false); }

std::string Node::display(bool nested) const {
  switch (kind_) {
    case NodeKind::Stop: return std::string(kStop);
    case NodeKind::Leaf: return state_ ? *state_ : std::string(kStop);
    case NodeKind::Seq: {
      std::string s = to_string(prefix_) + " . " + to_string(continuation_);
      return nested ? "(" + s + ")" : s;
    }
    case NodeKind::Alt:
    case NodeKind::Par: {
      std::string s = left_->display(true) + (kind_ == NodeKind::Alt ? " alt " : " par ") + right_->display(true);
      return nested ? "(" + s + ")" : s;
    }
  }
  return {};
}

bool Node::is_stop() const {
  return kind_ == NodeKind::Stop || (kind_ == NodeKind::Leaf && !state_);
}

bool Node::all_inactive() const {
  switch (kind_) {
    case NodeKind::Stop: return true;
    case NodeKind::Leaf: return !state_;
    case NodeKind::Seq: return false;
    case NodeKind::Alt:
    case NodeKind::Par: return left_->all_inactive() && right_->all_inactive();
  }
  return true;
}

// ---------------------------------------------------------------------------
// Reference resolution

namespace {

StateExpr resolve_in(const Model& model, const StateExpr& e, std::vector<std::string>& stack);

StateExpr resolve_name(const Model& model, const std::string& name, std::vector<std::string>& stack) {
  if (const Definition* d = model.find_definition(name)) {
    for (const auto& s : stack) {
      if (s == name) {
        std::string path;
        for (const auto& p : stack) path += p + " -> ";
        throw ReferenceError("cyclic definition: " + path + name);
      }
    }
    stack.push_back(name);
    StateExpr out = resolve_in(model, d->body, stack);
    stack.pop_back();
    return out;
  }
  if (model.find_itg(name)) return make_ref(name);
  throw ReferenceError("undeclared state constant '" + name + "'");
}

StateExpr resolve_in(const Model& model, const StateExpr& e, std::vector<std::string>& stack) {
  return std::visit(
      [&](const auto& n) -> StateExpr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, InactiveExpr>) {
          return e;
        } else if constexpr (std::is_same_v<T, PrefixedExpr>) {
          model.interaction(n.prefix.interaction);
          return make_prefixed(n.prefix, resolve_in(model, *n.then, stack));
        } else if constexpr (std::is_same_v<T, AltExpr>) {
          return make_alt(resolve_in(model, *n.left, stack), resolve_in(model, *n.right, stack));
        } else if constexpr (std::is_same_v<T, ParExpr>) {
          return make_par(resolve_in(model, *n.left, stack), resolve_in(model, *n.right, stack));
        } else if constexpr (std::is_same_v<T, LoopExpr>) {
          if (!model.find_itg(n.itg)) throw ReferenceError("loop over undeclared itg '" + n.itg + "'");
          return e;
        } else {
          return resolve_name(model, n.name, stack);
        }
      },
      e.node);
}

const Itg& graph(const Model& model, const std::string& name) {
  const Itg* g = model.find_itg(name);
  if (!g) throw ReferenceError("undeclared itg '" + name + "'");
  return *g;
}

}  // namespace

StateExpr resolve_refs(const Model& model, const std::string& name) {
  std::vector<std::string> stack;
  return resolve_name(model, name, stack);
}

StateExpr resolve_expr(const Model& model, const StateExpr& expr) {
  std::vector<std::string> stack;
  return resolve_in(model, expr, stack);
}

Instantiated instantiate(const Model& model, const StateExpr& e) {
  return std::visit(
      [&](const auto& n) -> Instantiated {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, InactiveExpr>) {
          return {Node::stop(), {}};
        } else if constexpr (std::is_same_v<T, PrefixedExpr>) {
          return {Node::seq(n.prefix, *n.then), {}};
        } else if constexpr (std::is_same_v<T, AltExpr> || std::is_same_v<T, ParExpr>) {
          Instantiated l = instantiate(model, *n.left);
          Instantiated r = instantiate(model, *n.right);
          NodePtr node = std::is_same_v<T, AltExpr> ? Node::alt(l.node, r.node) : Node::par(l.node, r.node);
          return {node, concat_snippets(l.initial_snippet, r.initial_snippet)};
        } else if constexpr (std::is_same_v<T, LoopExpr>) {
          const Itg& g = graph(model, n.itg);
          return {Node::leaf(g.name, g.initial_state()), g.initial_snippet()};
        } else {
          if (const Itg* g = model.find_itg(n.name)) {
            return {Node::leaf(g->name, g->initial_state()), g->initial_snippet()};
          }
          return instantiate(model, resolve_refs(model, n.name));
        }
      },
      e.node);
}

std::vector<Successor> successors(const Node& node, const Model& model) {
  std::vector<Successor> out;
  switch (node.kind()) {
    case NodeKind::Stop:
      break;
    case NodeKind::Leaf: {
      if (!node.state()) break;
      const Itg& g = graph(model, node.itg());
      for (const auto& t : g.transitions) {
        if (t.source == *node.state()) out.push_back({t.prefix, Node::leaf(g.name, t.target)});
      }
      break;
    }
    case NodeKind::Seq: {
      Instantiated next = instantiate(model, node.continuation());
      Prefix fired = node.prefix();
      fired.snippet = concat_snippets(fired.snippet, next.initial_snippet);
      out.push_back({std::move(fired), next.node});
      break;
    }
    case NodeKind::Alt: {
      out = successors(*node.left(), model);
      auto right = successors(*node.right(), model);
      out.insert(out.end(), right.begin(), right.end());
      break;
    }
    case NodeKind::Par: {
      for (auto& s : successors(*node.left(), model)) out.push_back({s.prefix, Node::par(s.next, node.right())});
      for (auto& s : successors(*node.right(), model)) out.push_back({s.prefix, Node::par(node.left(), s.next)});
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Graph composition

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int k = 1;; ++k) {
    std::string candidate = base + "#" + std::to_string(k);
    if (!taken.count(candidate)) return candidate;
  }
}

// Keeps only the states reachable from the entry and the transitions leaving them.
Itg restrict_reachable(Itg g) {
  std::set<std::string> seen{g.initial_state()};
  std::deque<std::string> work{g.initial_state()};
  while (!work.empty()) {
    std::string s = work.front();
    work.pop_front();
    for (const auto& t : g.transitions) {
      if (t.source == s && t.target && seen.insert(*t.target).second) work.push_back(*t.target);
    }
  }
  std::vector<Transition> kept;
  for (auto& t : g.transitions) {
    if (seen.count(t.source)) kept.push_back(std::move(t));
  }
  g.transitions = std::move(kept);
  g.states = std::move(seen);
  return g;
}

}  // namespace

Itg rename_states(const Itg& itg, const std::function<std::string(const std::string&)>& rename) {
  Itg out = itg;
  out.states.clear();
  for (const auto& s : itg.states) out.states.insert(rename(s));
  for (auto& init : out.inits) init.state = rename(init.state);
  for (auto& t : out.transitions) {
    t.source = rename(t.source);
    if (t.target) t.target = rename(*t.target);
  }
  return out;
}

Itg compose_sequence(const Prefix& prefix, const Itg& target, const std::string& new_state) {
  if (target.states.count(new_state)) {
    throw SbcError("state '" + new_state + "' already exists in itg '" + target.name + "'");
  }
  Prefix first = prefix;
  first.snippet = concat_snippets(prefix.snippet, target.initial_snippet());
  std::vector<Transition> transitions;
  transitions.push_back({new_state, std::move(first), target.initial_state(), {}});
  transitions.insert(transitions.end(), target.transitions.begin(), target.transitions.end());
  Itg out = Itg::make(new_state, {}, new_state, std::move(transitions));
  out.states.insert(target.states.begin(), target.states.end());
  return out;
}

Itg compose_alternative(const Itg& left, const Itg& right, const std::string& new_state) {
  if (left.states.count(new_state)) {
    throw SbcError("state '" + new_state + "' already exists in itg '" + left.name + "'");
  }
  std::set<std::string> taken = left.states;
  taken.insert(new_state);
  std::map<std::string, std::string> mapping;
  for (const auto& s : right.states) {
    std::string n = fresh_name(s, taken);
    taken.insert(n);
    mapping[s] = n;
  }
  Itg r = rename_states(right, [&](const std::string& s) { return mapping.at(s); });

  std::vector<Transition> transitions;
  for (const Itg* side : std::array<const Itg*, 2>{&left, &r}) {
    for (const auto* t : side->outgoing(side->initial_state())) {
      Transition copy = *t;
      copy.source = new_state;
      transitions.push_back(std::move(copy));
    }
  }
  for (const Itg* side : std::array<const Itg*, 2>{&left, &r}) {
    transitions.insert(transitions.end(), side->transitions.begin(), side->transitions.end());
  }
  Itg out = Itg::make(new_state, concat_snippets(left.initial_snippet(), r.initial_snippet()), new_state,
                      std::move(transitions));
  return restrict_reachable(std::move(out));
}

std::string default_pair_name(const std::optional<std::string>& left, const std::optional<std::string>& right) {
  return (left ? *left : std::string(kStop)) + " par " + (right ? *right : std::string(kStop));
}

Itg compose_parallel_expand(const Itg& left, const Itg& right, const PairNamer& namer) {
  using Side = std::optional<std::string>;
  using Pair = std::pair<Side, Side>;
  std::map<Pair, std::string> names;
  std::set<std::string> taken;
  std::deque<Pair> work;
  auto name_of = [&](const Pair& p) -> const std::string& {
    auto it = names.find(p);
    if (it != names.end()) return it->second;
    std::string n = fresh_name(namer(p.first, p.second), taken);
    taken.insert(n);
    work.push_back(p);
    return names.emplace(p, std::move(n)).first->second;
  };

  Pair start{left.initial_state(), right.initial_state()};
  std::string initial = name_of(start);
  std::vector<Transition> transitions;
  while (!work.empty()) {
    Pair p = work.front();
    work.pop_front();
    std::string src = names.at(p);
    if (p.first) {
      for (const auto* t : left.outgoing(*p.first)) {
        transitions.push_back({src, t->prefix, name_of({t->target, p.second}), {}});
      }
    }
    if (p.second) {
      for (const auto* t : right.outgoing(*p.second)) {
        transitions.push_back({src, t->prefix, name_of({p.first, t->target}), {}});
      }
    }
  }
  Itg out = Itg::make(initial, concat_snippets(left.initial_snippet(), right.initial_snippet()), initial,
                      std::move(transitions));
  out.states = taken;
  return out;
}

Itg expand_node(const Model& model, const Instantiated& start, const std::string& name, const ExpandOptions& options) {
  std::unordered_map<std::string, std::string> names;  // node key -> state name
  std::set<std::string> taken;
  std::deque<NodePtr> work;

  auto name_of = [&](const NodePtr& n, const std::string* forced) -> std::string {
    auto it = names.find(n->key());
    if (it != names.end()) return it->second;
    if (names.size() >= options.max_states) {
      throw StateSpaceError("state space of '" + name + "' exceeds " + std::to_string(options.max_states) + " states");
    }
    std::string s = fresh_name(forced ? *forced : n->display(), taken);
    taken.insert(s);
    names.emplace(n->key(), s);
    work.push_back(n);
    return s;
  };

  const NodePtr& root = start.node;
  bool composite = root->kind() != NodeKind::Leaf || root->is_stop();
  std::string initial = name_of(root, composite ? &name : nullptr);

  std::vector<Transition> transitions;
  while (!work.empty()) {
    NodePtr n = work.front();
    work.pop_front();
    std::string src = names.at(n->key());
    for (auto& s : successors(*n, model)) {
      std::optional<std::string> dst;
      if (!s.next->is_stop()) dst = name_of(s.next, nullptr);
      transitions.push_back({src, std::move(s.prefix), std::move(dst), {}});
    }
  }
  Itg out = Itg::make(name, start.initial_snippet, initial, std::move(transitions));
  out.states = taken;
  return out;
}

Itg expand(const Model& model, const std::string& name, const ExpandOptions& options) {
  StateExpr resolved = resolve_refs(model, name);
  return expand_node(model, instantiate(model, resolved), name, options);
}

std::vector<Derivative> derivatives(const Itg& itg, const std::optional<std::string>& from, std::size_t max_depth) {
  std::vector<Derivative> out;
  if (!from || max_depth == 0) return out;
  std::vector<Prefix> trace;
  std::function<void(const std::string&)> walk = [&](const std::string& state) {
    if (trace.size() == max_depth) return;
    for (const auto* t : itg.outgoing(state)) {
      trace.push_back(t->prefix);
      Derivative d{trace, t->target};
      bool seen = false;
      for (const auto& o : out) {
        if (o == d) {
          seen = true;
          break;
        }
      }
      if (!seen) out.push_back(std::move(d));
      if (t->target) walk(*t->target);
      trace.pop_back();
    }
  };
  walk(*from);
  return out;
}

bool is_loop(const Itg& itg) {
  const std::string& s0 = itg.initial_state();
  std::set<std::string> seen;
  std::deque<std::string> work;
  for (const auto* t : itg.outgoing(s0)) {
    if (t->target && seen.insert(*t->target).second) work.push_back(*t->target);
  }
  while (!work.empty()) {
    std::string s = work.front();
    work.pop_front();
    if (s == s0) return true;
    for (const auto* t : itg.outgoing(s)) {
      if (t->target && seen.insert(*t->target).second) work.push_back(*t->target);
    }
  }
  return false;
}

}  // namespace sbc
