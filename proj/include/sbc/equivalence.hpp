#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "sbc/model.hpp"
#include "sbc/semantics.hpp"

namespace sbc {

// Observable part of a transition: canonical guard, interaction id and
// canonical snippet. A TRUE guard and an empty snippet both render as "nil".
struct Label {
  std::string guard;
  std::string interaction;
  std::string snippet;

  static Label of(const Prefix& p);
  std::string render() const;  // same spelling as a prefix: "[g ? a / s]"
  friend auto operator<=>(const Label&, const Label&) = default;
};

// Finite labelled transition system. The inactive state of a graph becomes
// an ordinary state without outgoing edges.
struct Lts {
  struct Edge {
    Label label;
    std::size_t target;
  };

  std::vector<std::string> names;
  std::vector<std::vector<Edge>> edges;
  std::size_t initial = 0;
  std::string initial_snippet;  // canonical text of the entry snippet

  std::size_t size() const { return names.size(); }
};

Lts lts_from_itg(const Itg& itg);
// On-the-fly exploration of a resolved expression. Throws StateSpaceError
// past `max_states`.
Lts lts_from_expr(const Model& model, const StateExpr& resolved, std::size_t max_states = 100000);

struct BisimResult {
  bool equivalent = false;
  // When not equivalent: labels leading from the initial states to a point
  // where one side can perform the last label and the other cannot. Empty
  // when only the entry snippets differ.
  std::vector<std::string> witness;
  std::string explanation;
};

// Strong bisimulation of the initial states via partition refinement over
// the disjoint union. Entry snippets must match as well.
BisimResult bisimilar(const Lts& a, const Lts& b);

}  // namespace sbc
