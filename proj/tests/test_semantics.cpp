#include <gtest/gtest.h>

#include <algorithm>
#include <deque>

#include "oracles.hpp"
#include "sbc/semantics.hpp"
#include "support.hpp"

using namespace sbc;
using testing_support::load_model;

namespace {

struct Fixture : ::testing::Test {
  Model counter = load_model("counter.sbc");
  Model atm = load_model("atm.sbc");
  const Itg& g41 = counter.itgs.at("s41");
  const Itg& g51 = counter.itgs.at("s51");
  const Itg& g61 = counter.itgs.at("s61");

  Itg copy_of(const Itg& g, const std::string& suffix) {
    Itg c = rename_states(g, [&](const std::string& s) { return s + suffix; });
    c.name += suffix;
    return c;
  }
};

std::multiset<std::string> labels_from(const Itg& g, const std::string& state) {
  std::multiset<std::string> out;
  for (const auto* t : g.outgoing(state)) out.insert(t->prefix.interaction);
  return out;
}

std::multiset<std::string> labels(const std::vector<Successor>& succ) {
  std::multiset<std::string> out;
  for (const auto& s : succ) out.insert(oracle::label(s.prefix));
  return out;
}

}  // namespace

TEST_F(Fixture, ResolveAtm) {
  StateExpr e = resolve_refs(atm, "s_ATM");
  EXPECT_EQ(e, make_par(make_par(make_ref("s101"), make_ref("s201")), make_ref("s301")));
}

TEST_F(Fixture, ResolveOverviewDiagram) {
  Model iod = load_model("iod.sbc");
  StateExpr e = resolve_refs(iod, "s34");
  Prefix r36 = make_prefix(std::nullopt, "a36", std::nullopt, iod);
  EXPECT_EQ(e, make_par(make_par(make_ref("s35"), make_prefixed(r36, make_ref("s01"))),
                        make_alt(make_ref("s21"), make_ref("s31"))));
}

TEST_F(Fixture, ResolveInlinesDefinitions) {
  Model m = counter;
  m.definitions["outer"] = Definition{"outer", make_alt(make_ref("s81"), make_inactive()), {}};
  EXPECT_EQ(resolve_refs(m, "outer"), make_alt(make_par(make_ref("s51"), make_ref("s61")), make_inactive()));
}

TEST_F(Fixture, ResolveErrors) {
  EXPECT_THROW(resolve_refs(counter, "nope"), ReferenceError);
  Model m = counter;
  m.definitions["d1"] = Definition{"d1", make_ref("d2"), {}};
  m.definitions["d2"] = Definition{"d2", make_par(make_ref("s51"), make_ref("d1")), {}};
  EXPECT_THROW(resolve_refs(m, "d1"), ReferenceError);
  m.definitions["d3"] = Definition{"d3", make_ref("ghost"), {}};
  EXPECT_THROW(resolve_refs(m, "d3"), ReferenceError);
}

TEST_F(Fixture, SequenceRule) {
  Prefix r55 = make_prefix(std::nullopt, "a55", parse_snippet("credit = 3000;"), counter);
  Itg g = compose_sequence(r55, g51, "s55");
  EXPECT_EQ(g.initial_state(), "s55");
  EXPECT_TRUE(g.initial_snippet().empty());
  ASSERT_EQ(g.transitions.size(), 4u);
  EXPECT_EQ(g.transitions[0].source, "s55");
  EXPECT_EQ(g.transitions[0].target, std::optional<std::string>("s51"));
  EXPECT_EQ(to_string(g.transitions[0].prefix.snippet), "credit = 3000; c_count = 100;");
  EXPECT_EQ(g.states, (std::set<std::string>{"s51", "s52", "s55"}));
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(g.transitions[i], g51.transitions[i - 1]);
}

TEST_F(Fixture, SequenceOverStopOnlyGraph) {
  Itg g = compose_sequence(g61.transitions[0].prefix, g61, "s0");
  ASSERT_EQ(g.transitions.size(), 2u);
  EXPECT_EQ(g.transitions[0].target, std::optional<std::string>("s61"));
  EXPECT_TRUE(g.transitions[1].to_inactive());
}

TEST_F(Fixture, SequenceNilSnippets) {
  Prefix bare = make_prefix(std::nullopt, "a41", std::nullopt, counter);
  Itg g = compose_sequence(bare, g61, "sX");
  EXPECT_TRUE(g.transitions[0].prefix.snippet.empty());
  EXPECT_TRUE(g.initial_snippet().empty());
}

TEST_F(Fixture, SequenceRejectsCollision) {
  Prefix bare = make_prefix(std::nullopt, "a41", std::nullopt, counter);
  EXPECT_THROW(compose_sequence(bare, g51, "s52"), SbcError);
}

TEST_F(Fixture, SequenceInitialSnippetAlwaysNil) {
  for (const auto& [_, g] : counter.itgs) {
    Prefix p = make_prefix(parse_guard("A > 1"), "a41", parse_snippet("q = 1;"), counter);
    EXPECT_TRUE(compose_sequence(p, g, "fresh").initial_snippet().empty());
  }
}

TEST_F(Fixture, AlternativeRule) {
  Itg g = compose_alternative(g51, g61, "s71");
  EXPECT_EQ(to_string(g.initial_snippet()), "c_count = 100;");
  EXPECT_EQ(g.transitions.size(), 6u);
  EXPECT_EQ(labels_from(g, "s71"), (std::multiset<std::string>{"a51", "a53", "a61"}));
  EXPECT_EQ(g.states, (std::set<std::string>{"s51", "s52", "s71"}));
}

TEST_F(Fixture, AlternativeOfTwoCopies) {
  Itg g = compose_alternative(g61, copy_of(g61, "'"), "sX");
  ASSERT_EQ(g.transitions.size(), 2u);
  for (const auto& t : g.transitions) {
    EXPECT_EQ(t.source, "sX");
    EXPECT_TRUE(t.to_inactive());
  }
  EXPECT_EQ(g.states, (std::set<std::string>{"sX"}));
}

TEST_F(Fixture, AlternativeRenamesClashes) {
  Itg g = compose_alternative(g61, g61, "sX");
  EXPECT_EQ(g.transitions.size(), 2u);
  Itg h = compose_alternative(g51, g51, "sY");
  EXPECT_EQ(labels_from(h, "sY").size(), 4u);
  EXPECT_TRUE(h.states.count("s52#1") || h.states.count("s52#2"));
  EXPECT_EQ(to_string(h.initial_snippet()), "c_count = 100; c_count = 100;");
}

TEST_F(Fixture, AlternativeWithAcyclicSingleBranch) {
  Itg g = compose_alternative(g61, g51, "sZ");
  std::size_t from_61 = 0;
  for (const auto* t : g.outgoing("sZ")) from_61 += t->prefix.interaction == "a61";
  EXPECT_EQ(from_61, 1u);
  EXPECT_FALSE(g.states.count("s61"));
}

TEST_F(Fixture, ParallelRuleMatchesBruteForce) {
  Itg g = compose_parallel_expand(g51, g61);
  EXPECT_EQ(g.states.size(), 6u);
  EXPECT_EQ(g.transitions.size(), 9u);
  EXPECT_EQ(to_string(g.initial_snippet()), "c_count = 100;");
  EXPECT_EQ(g.initial_state(), "s51 par s61");
  EXPECT_TRUE(g.states.count("STOP par STOP"));

  oracle::Graph full = oracle::full_product(g51, g61);
  EXPECT_EQ(full.edges.size(), 3u * 2 + 3u * 1);
  oracle::Graph expected = oracle::reachable_part(full);
  oracle::Graph actual = oracle::graph_of(g);
  EXPECT_EQ(actual.edges, expected.edges);
  EXPECT_EQ(actual.states, expected.states);
}

TEST_F(Fixture, ParallelUnitIsIdentity) {
  Itg unit = Itg::make("u", {}, "u0", {});
  Itg g = compose_parallel_expand(unit, g51, [](const auto&, const auto& v) { return v ? *v : "STOP"; });
  // (u0, STOP) is a named product state; it plays the inactive state's role
  EXPECT_EQ(oracle::graph_of(g).edges, oracle::graph_of(g51).edges);
  EXPECT_EQ(oracle::graph_of(g).states, oracle::graph_of(g51).states);
  EXPECT_EQ(g.initial_snippet(), g51.initial_snippet());
}

TEST_F(Fixture, ParallelOfTwoCopies) {
  Itg g = compose_parallel_expand(g61, copy_of(g61, "'"));
  EXPECT_EQ(g.states.size(), 4u);
  EXPECT_EQ(g.transitions.size(), 1u * 2 + 2u * 1);
  EXPECT_EQ(oracle::graph_of(g).edges, oracle::full_product(g61, copy_of(g61, "'")).edges);
}

TEST_F(Fixture, ProductLawOverCorpusPairs) {
  std::vector<const Itg*> gs;
  for (const auto& [_, g] : counter.itgs) gs.push_back(&g);
  for (const auto& [_, g] : atm.itgs) gs.push_back(&g);
  for (const Itg* a : gs) {
    for (const Itg* b : gs) {
      Itg p = compose_parallel_expand(*a, rename_states(*b, [](const std::string& s) { return s + "'"; }));
      Itg b2 = rename_states(*b, [](const std::string& s) { return s + "'"; });
      oracle::Graph expected = oracle::reachable_part(oracle::full_product(*a, b2));
      EXPECT_EQ(oracle::graph_of(p).edges, expected.edges) << a->name << " par " << b->name;
      EXPECT_EQ(oracle::graph_of(p).states, expected.states) << a->name << " par " << b->name;
      // reachable STOP on each side contributes a column / row
      auto count = [](const Itg& g) {
        bool stop = std::any_of(g.transitions.begin(), g.transitions.end(), [](auto& t) { return t.to_inactive(); });
        return std::pair{g.states.size() + stop, g.transitions.size()};
      };
      auto [s1, t1] = count(*a);
      auto [s2, t2] = count(b2);
      EXPECT_EQ(p.states.size(), s1 * s2) << a->name << " par " << b->name;
      EXPECT_EQ(p.transitions.size(), t1 * s2 + s1 * t2) << a->name << " par " << b->name;
    }
  }
}

TEST_F(Fixture, ParallelIsCommutativeUpToPairSwap) {
  Itg ab = compose_parallel_expand(g51, g61);
  Itg ba = compose_parallel_expand(g61, g51);
  oracle::Graph swapped;
  for (const auto& [src, l, dst] : oracle::graph_of(ba).edges) {
    auto flip = [](const std::string& n) {
      auto at = n.find(" par ");
      return n.substr(at + 5) + " par " + n.substr(0, at);
    };
    swapped.edges.emplace(flip(src), l, flip(dst));
  }
  EXPECT_EQ(swapped.edges, oracle::graph_of(ab).edges);
  EXPECT_EQ(to_string(ba.initial_snippet()), "c_count = 100;");
}

TEST_F(Fixture, SuccessorsOfLeaf) {
  auto succ = successors(*Node::leaf("s41", "s41"), counter);
  ASSERT_EQ(succ.size(), 2u);
  EXPECT_EQ(succ[0].prefix.interaction, "a41");
  EXPECT_EQ(succ[0].next->display(), "s42");
  EXPECT_EQ(succ[1].prefix.interaction, "a42");
  EXPECT_TRUE(succ[1].next->is_stop());
}

TEST_F(Fixture, SuccessorsOfParallelNode) {
  Instantiated start = instantiate(counter, resolve_refs(counter, "s91"));
  EXPECT_EQ(start.node->display(), "s51 par s61");
  EXPECT_EQ(to_string(start.initial_snippet), "c_count = 100;");
  auto succ = successors(*start.node, counter);
  ASSERT_EQ(succ.size(), 3u);
  std::vector<std::pair<std::string, std::string>> got;
  for (const auto& s : succ) got.emplace_back(s.prefix.interaction, s.next->display());
  EXPECT_EQ(got, (std::vector<std::pair<std::string, std::string>>{
                     {"a51", "s52 par s61"}, {"a53", "STOP par s61"}, {"a61", "s51 par STOP"}}));
}

TEST_F(Fixture, SuccessorsOfStop) {
  EXPECT_TRUE(successors(*Node::stop(), counter).empty());
  EXPECT_TRUE(successors(*Node::leaf("s61", std::nullopt), counter).empty());
}

TEST_F(Fixture, SequenceNodeCarriesContinuationEntrySnippet) {
  Instantiated start = instantiate(counter, resolve_refs(counter, "s55"));
  EXPECT_TRUE(start.initial_snippet.empty());
  auto succ = successors(*start.node, counter);
  ASSERT_EQ(succ.size(), 1u);
  EXPECT_EQ(to_string(succ[0].prefix.snippet), "credit = 3000; c_count = 100;");
  EXPECT_EQ(succ[0].next->display(), "s51");
}

TEST_F(Fixture, AlternativeNodeCommits) {
  Instantiated start = instantiate(counter, resolve_refs(counter, "s71"));
  EXPECT_EQ(to_string(start.initial_snippet), "c_count = 100;");
  auto succ = successors(*start.node, counter);
  EXPECT_EQ(succ.size(), 3u);
  for (const auto& s : succ) EXPECT_NE(s.next->kind(), NodeKind::Alt);
}

TEST_F(Fixture, DerivativesOfItg41) {
  auto d = derivatives(g41, "s41", 2);
  oracle::PathSet got;
  for (const auto& x : d) {
    std::vector<std::string> ls;
    for (const auto& p : x.trace) ls.push_back(oracle::label(p));
    got.emplace(ls, oracle::state_name(x.end));
  }
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(got, oracle::paths(g41, "s41", 2));
  std::set<std::pair<std::string, std::string>> shape;
  for (const auto& x : d) {
    std::string t;
    for (const auto& p : x.trace) t += p.interaction + ".";
    shape.emplace(t, oracle::state_name(x.end));
  }
  EXPECT_EQ(shape, (std::set<std::pair<std::string, std::string>>{
                       {"a41.", "s42"}, {"a42.", "STOP"}, {"a41.a43.", "STOP"}}));
}

TEST_F(Fixture, DerivativesOfItg51) {
  auto d = derivatives(g51, "s51", 2);
  std::set<std::pair<std::string, std::string>> shape;
  for (const auto& x : d) {
    std::string t;
    for (const auto& p : x.trace) t += p.interaction + ".";
    shape.emplace(t, oracle::state_name(x.end));
  }
  EXPECT_EQ(shape, (std::set<std::pair<std::string, std::string>>{
                       {"a51.", "s52"}, {"a53.", "STOP"}, {"a51.a52.", "s51"}}));
}

TEST_F(Fixture, DerivativesFromStopAreEmpty) {
  EXPECT_TRUE(derivatives(g41, std::nullopt, 5).empty());
}

TEST_F(Fixture, DerivativesAgreeWithPathEnumeration) {
  for (const Model* m : {&counter, &atm}) {
    for (const auto& [_, g] : m->itgs) {
      for (const auto& s : g.states) {
        for (std::size_t depth = 1; depth <= 6; ++depth) {
          auto d = derivatives(g, s, depth);
          oracle::PathSet got;
          for (const auto& x : d) {
            std::vector<std::string> ls;
            for (const auto& p : x.trace) ls.push_back(oracle::label(p));
            got.emplace(ls, oracle::state_name(x.end));
          }
          EXPECT_EQ(got.size(), d.size()) << "duplicates";
          EXPECT_EQ(got, oracle::paths(g, s, depth)) << g.name << " " << s << " " << depth;
        }
        // depth one is exactly the outgoing set
        auto one = derivatives(g, s, 1);
        EXPECT_EQ(one.size(), g.outgoing(s).size());
      }
    }
  }
}

TEST_F(Fixture, LoopDetection) {
  EXPECT_TRUE(is_loop(g51));
  EXPECT_TRUE(is_loop(atm.itgs.at("s201")));
  EXPECT_TRUE(is_loop(atm.itgs.at("s101")));
  EXPECT_FALSE(is_loop(g41));
  EXPECT_FALSE(is_loop(g61));
}

TEST_F(Fixture, ExpandMatchesCompositionRules) {
  Itg s81 = expand(counter, "s81");
  EXPECT_EQ(s81.initial_state(), "s81");
  Itg direct = compose_parallel_expand(g51, g61, [](const auto& u, const auto& v) {
    std::string n = default_pair_name(u, v);
    return n == "s51 par s61" ? std::string("s81") : n;
  });
  EXPECT_EQ(oracle::graph_of(s81).edges, oracle::graph_of(direct).edges);
  EXPECT_EQ(s81.states, direct.states);

  Itg s71 = expand(counter, "s71");
  Itg alt = compose_alternative(g51, g61, "s71");
  EXPECT_EQ(oracle::graph_of(s71).edges, oracle::graph_of(alt).edges);
  EXPECT_EQ(s71.initial_snippet(), alt.initial_snippet());

  Itg s55 = expand(counter, "s55");
  Itg seq = compose_sequence(make_prefix(std::nullopt, "a55", parse_snippet("credit = 3000;"), counter), g51, "s55");
  EXPECT_EQ(oracle::graph_of(s55).edges, oracle::graph_of(seq).edges);
  EXPECT_TRUE(s55.initial_snippet().empty());

  Itg leaf = expand(counter, "s41");
  EXPECT_EQ(oracle::graph_of(leaf).edges, oracle::graph_of(g41).edges);
}

TEST_F(Fixture, ExpandRespectsStateBound) {
  EXPECT_THROW(expand(atm, "s_ATM", ExpandOptions{3}), StateSpaceError);
  EXPECT_EQ(expand(atm, "s_ATM").states.size(), 5u);
}

// For every configuration reachable on the fly, the expanded graph offers
// the same prefixes into the state of the same name.
TEST_F(Fixture, ExpandedAndOnTheFlySuccessorsAgree) {
  for (const Model* m : {&counter, &atm}) {
    for (const auto& [name, _] : m->definitions) {
      Itg g = expand(*m, name);
      Instantiated start = instantiate(*m, resolve_refs(*m, name));
      EXPECT_EQ(g.initial_snippet(), start.initial_snippet);
      std::map<std::string, std::string> seen{{start.node->key(), g.initial_state()}};
      std::deque<NodePtr> todo{start.node};
      while (!todo.empty()) {
        NodePtr n = todo.front();
        todo.pop_front();
        const std::string& state = seen.at(n->key());
        std::multiset<std::string> expected;
        for (const auto* t : g.outgoing(state)) expected.insert(oracle::label(t->prefix) + " -> " + oracle::state_name(t->target));
        std::multiset<std::string> actual;
        for (const auto& s : successors(*n, *m)) {
          std::string target = s.next->is_stop() ? "STOP" : s.next->display();
          if (auto it = seen.find(s.next->key()); it != seen.end()) target = it->second;
          actual.insert(oracle::label(s.prefix) + " -> " + target);
          if (seen.emplace(s.next->key(), target).second) todo.push_back(s.next);
        }
        EXPECT_EQ(actual, expected) << name << " at " << state;
      }
    }
  }
}

TEST_F(Fixture, RenameStates) {
  Itg r = rename_states(g51, [](const std::string& s) { return s == "s52" ? "x" : s; });
  EXPECT_EQ(r.states, (std::set<std::string>{"s51", "x"}));
  EXPECT_EQ(r.transitions[0].target, std::optional<std::string>("x"));
  EXPECT_EQ(r.initial_state(), "s51");
}

TEST_F(Fixture, NodeDisplayAndInactivity) {
  NodePtr n = Node::par(Node::leaf("a", std::nullopt), Node::par(Node::stop(), Node::leaf("b", "x")));
  EXPECT_EQ(n->display(), "STOP par (STOP par x)");
  EXPECT_FALSE(n->all_inactive());
  EXPECT_TRUE(Node::par(Node::stop(), Node::leaf("a", std::nullopt))->all_inactive());
}
