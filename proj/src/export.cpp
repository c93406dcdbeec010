#include "sbc/export.hpp"

#include <json.hpp>

namespace sbc {

using nlohmann::json;

namespace {

json nullable(const std::string& text) { return text == "nil" ? json(nullptr) : json(text); }

std::string text_or_nil(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return "nil";
  if (!j.at(key).is_string()) throw SbcError(std::string("field '") + key + "' must be a string or null");
  return j.at(key).get<std::string>();
}

std::string required_string(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw SbcError(std::string("missing string field '") + key + "'");
  }
  return j.at(key).get<std::string>();
}

}  // namespace

std::string export_json(const Itg& itg, const Model* model) {
  json doc;
  doc["name"] = itg.name;
  doc["states"] = json::array();
  for (const auto& s : itg.states) doc["states"].push_back(s);  // std::set is already sorted
  if (!itg.inits.empty()) {
    doc["initial"] = {{"snippet", nullable(to_string(itg.initial_snippet()))}, {"state", itg.initial_state()}};
  } else {
    doc["initial"] = nullptr;
  }
  doc["transitions"] = json::array();
  for (const auto& t : itg.transitions) {
    json jt;
    jt["src"] = t.source;
    jt["guard"] = nullable(to_string(t.prefix.guard));
    jt["interactionId"] = t.prefix.interaction;
    jt["snippet"] = nullable(to_string(t.prefix.snippet));
    jt["dst"] = t.target ? *t.target : std::string(kStop);
    const Interaction* i = model ? model->find_interaction(t.prefix.interaction) : nullptr;
    jt["caller"] = i ? json(to_string(i->caller)) : json(nullptr);
    jt["channel"] = i ? json(i->channel) : json(nullptr);
    jt["callee"] = i ? json(":" + i->callee) : json(nullptr);
    doc["transitions"].push_back(std::move(jt));
  }
  return doc.dump(2) + "\n";
}

Itg import_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SbcError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SbcError("ITG document must be a JSON object");
  Itg g;
  g.name = required_string(doc, "name");
  if (!doc.contains("states") || !doc.at("states").is_array()) throw SbcError("missing array field 'states'");
  for (const auto& s : doc.at("states")) {
    if (!s.is_string()) throw SbcError("state names must be strings");
    g.states.insert(s.get<std::string>());
  }
  if (doc.contains("initial") && !doc.at("initial").is_null()) {
    const auto& init = doc.at("initial");
    g.inits.push_back({parse_snippet(text_or_nil(init, "snippet")), required_string(init, "state"), {}});
  }
  if (!doc.contains("transitions") || !doc.at("transitions").is_array()) {
    throw SbcError("missing array field 'transitions'");
  }
  for (const auto& jt : doc.at("transitions")) {
    Transition t;
    t.source = required_string(jt, "src");
    t.prefix.guard = parse_guard(text_or_nil(jt, "guard"));
    t.prefix.interaction = required_string(jt, "interactionId");
    t.prefix.snippet = parse_snippet(text_or_nil(jt, "snippet"));
    std::string dst = required_string(jt, "dst");
    if (dst != kStop) t.target = std::move(dst);
    g.transitions.push_back(std::move(t));
  }
  return g;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string edge_label(const Prefix& p) {
  std::string out;
  if (!p.guard.is_true()) out += "[" + to_string(p.guard) + "] ";
  out += p.interaction;
  if (!p.snippet.empty()) out += " / " + to_string(p.snippet);
  return out;
}

}  // namespace

std::string export_dot(const Itg& itg) {
  const std::string entry = "__entry";
  const std::string stop = "__stop";
  std::string out = "digraph " + quoted(itg.name) + " {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=box, style=rounded];\n";
  out += "  " + quoted(entry) + " [shape=none, label=\"\", width=0, height=0];\n";
  bool uses_stop = false;
  for (const auto& t : itg.transitions) uses_stop = uses_stop || t.to_inactive();
  if (uses_stop) out += "  " + quoted(stop) + " [shape=point, width=0.15, label=\"\"];\n";
  for (const auto& s : itg.states) out += "  " + quoted(s) + ";\n";
  for (const auto& init : itg.inits) {
    out += "  " + quoted(entry) + " -> " + quoted(init.state);
    if (!init.snippet.empty()) out += " [label=" + quoted(to_string(init.snippet)) + "]";
    out += ";\n";
  }
  for (const auto& t : itg.transitions) {
    out += "  " + quoted(t.source) + " -> " + quoted(t.target ? *t.target : stop) +
           " [label=" + quoted(edge_label(t.prefix)) + "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace sbc
