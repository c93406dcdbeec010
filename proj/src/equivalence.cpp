#include "sbc/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <map>
#include <unordered_map>

namespace sbc {

Label Label::of(const Prefix& p) { return {to_string(p.guard), p.interaction, to_string(p.snippet)}; }

std::string Label::render() const {
  std::string out = "[";
  if (guard != "nil") out += guard + " ? ";
  out += interaction;
  if (snippet != "nil") out += " / " + snippet;
  return out + "]";
}

Lts lts_from_itg(const Itg& itg) {
  Lts lts;
  std::map<std::string, std::size_t> index;
  for (const auto& s : itg.states) {
    index[s] = lts.names.size();
    lts.names.push_back(s);
  }
  std::optional<std::size_t> stop;
  for (const auto& t : itg.transitions) {
    if (!t.target && !stop) {
      stop = lts.names.size();
      lts.names.push_back(std::string(kStop));
    }
  }
  lts.edges.resize(lts.names.size());
  for (const auto& t : itg.transitions) {
    std::size_t dst = t.target ? index.at(*t.target) : *stop;
    lts.edges[index.at(t.source)].push_back({Label::of(t.prefix), dst});
  }
  lts.initial = index.at(itg.initial_state());
  lts.initial_snippet = to_string(itg.initial_snippet());
  return lts;
}

Lts lts_from_expr(const Model& model, const StateExpr& resolved, std::size_t max_states) {
  Instantiated start = instantiate(model, resolved);
  Lts lts;
  std::unordered_map<std::string, std::size_t> index;
  std::deque<NodePtr> work;
  auto id_of = [&](const NodePtr& n) {
    auto [it, fresh] = index.emplace(n->key(), lts.names.size());
    if (fresh) {
      if (lts.names.size() >= max_states) {
        throw StateSpaceError("state space exceeds " + std::to_string(max_states) + " states");
      }
      lts.names.push_back(n->display());
      lts.edges.emplace_back();
      work.push_back(n);
    }
    return it->second;
  };
  lts.initial = id_of(start.node);
  lts.initial_snippet = to_string(start.initial_snippet);
  while (!work.empty()) {
    NodePtr n = work.front();
    work.pop_front();
    std::size_t src = index.at(n->key());
    for (const auto& s : successors(*n, model)) {
      std::size_t dst = id_of(s.next);
      lts.edges[src].push_back({Label::of(s.prefix), dst});
    }
  }
  return lts;
}

namespace {

struct Union {
  std::vector<std::vector<std::pair<int, std::size_t>>> edges;  // (label id, target)
  std::vector<Label> labels;
};

Union disjoint_union(const Lts& a, const Lts& b) {
  Union u;
  std::map<Label, int> ids;
  auto label_id = [&](const Label& l) {
    auto [it, fresh] = ids.emplace(l, static_cast<int>(u.labels.size()));
    if (fresh) u.labels.push_back(l);
    return it->second;
  };
  u.edges.resize(a.size() + b.size());
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (const auto& e : a.edges[s]) u.edges[s].push_back({label_id(e.label), e.target});
  }
  for (std::size_t s = 0; s < b.size(); ++s) {
    for (const auto& e : b.edges[s]) u.edges[a.size() + s].push_back({label_id(e.label), a.size() + e.target});
  }
  return u;
}

// history[k][s] is the block of s after k refinement rounds; history[0] is
// the trivial partition.
std::vector<std::vector<std::size_t>> refine(const Union& u) {
  std::size_t n = u.edges.size();
  std::vector<std::vector<std::size_t>> history;
  history.emplace_back(n, 0);
  std::size_t blocks = n ? 1 : 0;
  while (true) {
    const auto& prev = history.back();
    std::map<std::pair<std::size_t, std::vector<std::pair<int, std::size_t>>>, std::size_t> signatures;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::pair<int, std::size_t>> sig;
      for (const auto& [label, target] : u.edges[s]) sig.push_back({label, prev[target]});
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      auto [it, _] = signatures.emplace(std::pair(prev[s], std::move(sig)), signatures.size());
      next[s] = it->second;
    }
    history.push_back(std::move(next));
    if (signatures.size() == blocks) break;
    blocks = signatures.size();
  }
  return history;
}

// Walks down the refinement history to build a distinguishing trace.
void explain(const Union& u, const std::vector<std::vector<std::size_t>>& history, std::size_t p, std::size_t q,
             std::size_t split_round, BisimResult& out, std::size_t a_size) {
  for (std::size_t k = split_round; k >= 1; --k) {
    const auto& coarse = history[k - 1];
    auto find_move = [&](std::size_t x, std::size_t y) -> std::optional<std::pair<int, std::size_t>> {
      for (const auto& [label, xt] : u.edges[x]) {
        bool matched = false;
        for (const auto& [l2, yt] : u.edges[y]) {
          if (l2 == label && coarse[yt] == coarse[xt]) {
            matched = true;
            break;
          }
        }
        if (!matched) return std::pair(label, xt);
      }
      return std::nullopt;
    };
    auto move = find_move(p, q);
    if (!move) {
      std::swap(p, q);
      move = find_move(p, q);
    }
    if (!move) break;  // cannot happen when the rounds really split p and q
    auto [label, p_next] = *move;
    out.witness.push_back(u.labels[label].render());
    std::optional<std::size_t> q_next;
    for (const auto& [l2, yt] : u.edges[q]) {
      if (l2 == label) {
        q_next = yt;
        break;
      }
    }
    if (!q_next) {
      std::string side = p < a_size ? "left" : "right";
      std::string other = p < a_size ? "right" : "left";
      out.explanation = side + " side can perform " + u.labels[label].render() + " here but the " + other + " side cannot";
      return;
    }
    p = p_next;
    q = *q_next;
  }
  if (out.explanation.empty()) out.explanation = "behaviours diverge after the witness trace";
}

}  // namespace

BisimResult bisimilar(const Lts& a, const Lts& b) {
  BisimResult out;
  Union u = disjoint_union(a, b);
  auto history = refine(u);
  std::size_t p = a.initial;
  std::size_t q = a.size() + b.initial;
  if (history.back()[p] != history.back()[q]) {
    std::size_t split = 1;
    while (history[split][p] == history[split][q]) ++split;
    explain(u, history, p, q, split, out, a.size());
    return out;
  }
  if (a.initial_snippet != b.initial_snippet) {
    out.explanation = "entry snippets differ: {" + a.initial_snippet + "} vs {" + b.initial_snippet + "}";
    return out;
  }
  out.equivalent = true;
  return out;
}

}  // namespace sbc
