#pragma once

#include <string>
#include <string_view>

#include "sbc/model.hpp"

namespace sbc {

// Byte-stable JSON: sorted keys, sorted `states`, transitions in graph order.
// `caller`, `channel` and `callee` are looked up in `model` and are null
// without one. Nil guards and snippets are null; STOP encodes the inactive state.
std::string export_json(const Itg& itg, const Model* model = nullptr);

// Inverse of export_json. Throws SbcError on malformed documents and
// ParseError on malformed guard / snippet text.
Itg import_json(std::string_view text);

// Graphviz digraph: rounded boxes for states, a point for the inactive
// state, and a label-less entry marker feeding the initial state.
std::string export_dot(const Itg& itg);

}  // namespace sbc
