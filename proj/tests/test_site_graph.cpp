#include "navmine/site_graph.hpp"

#include <optional>
#include <set>
#include <sstream>

#include "doctest.h"

using namespace navmine;

namespace {

// The example site: a root with two sections and one deep page.
SiteGraph example_graph() {
  SiteGraph g;
  g.add_edge("P", "P1");
  g.add_edge("P", "P2");
  g.add_edge("P1", "P3");
  g.add_edge("P1", "P4");
  g.add_edge("P2", "P5");
  g.add_edge("P2", "P6");
  g.add_edge("P6", "P9");
  g.set_root("P");
  return g;
}

// Oracle: exhaustive enumeration of all simple paths, independent of the
// BFS in the implementation.
std::optional<int> shortest_by_enumeration(const SiteGraph& g,
                                           const std::string& from,
                                           const std::string& to) {
  if (from == to) return 0;
  std::optional<int> best;
  std::set<std::string> on_path{from};
  // depth-first enumeration with an explicit stack
  struct Frame {
    std::string node;
    std::size_t next_child = 0;
  };
  std::vector<Frame> frames{{from, 0}};
  while (!frames.empty()) {
    Frame& f = frames.back();
    const auto& outs = g.out_links(f.node);
    if (f.next_child >= outs.size()) {
      on_path.erase(f.node);
      frames.pop_back();
      continue;
    }
    const std::string child = outs[f.next_child++];
    if (on_path.count(child)) continue;
    const int depth = static_cast<int>(frames.size());
    if (child == to) {
      if (!best || depth < *best) best = depth;
      continue;
    }
    on_path.insert(child);
    frames.push_back({child, 0});
  }
  return best;
}

}  // namespace

TEST_CASE("load_edge_list on an empty stream") {
  std::istringstream in("");
  const SiteGraph g = load_edge_list(in);
  CHECK(g.node_count() == 0);
  CHECK(g.edge_count() == 0);
  CHECK_FALSE(g.root().has_value());
}

TEST_CASE("load_edge_list reads the example edges") {
  std::istringstream in(
      "# root P\n"
      "P\tP1\n"
      "P P2\n"
      "P1 P3\n"
      "P1 P4\n"
      "P2 P5\n"
      "P2 P6\n"
      "# a comment between edges\n"
      "P6 P9\n"
      "P6 P9\n");  // duplicate, silently ignored
  const SiteGraph g = load_edge_list(in);
  // the seven edges span eight distinct endpoints
  CHECK(g.node_count() == 8);
  CHECK(g.edge_count() == 7);
  REQUIRE(g.root().has_value());
  CHECK(*g.root() == "P");
  CHECK(g.is_connected("P6", "P9"));
}

TEST_CASE("load_edge_list rejects bad lines") {
  std::istringstream one_token("P1\n");
  CHECK_THROWS_AS(load_edge_list(one_token), BadEdgeLine);

  std::istringstream three_tokens("a b c\n");
  CHECK_THROWS_AS(load_edge_list(three_tokens), BadEdgeLine);

  std::istringstream later("a b\n\nP1\n");
  try {
    load_edge_list(later);
    FAIL("expected BadEdgeLine");
  } catch (const BadEdgeLine& e) {
    CHECK(e.line_number == 3);
  }
}

TEST_CASE("is_connected checks exact edge membership") {
  const SiteGraph g = example_graph();
  CHECK(g.is_connected("P1", "P3"));
  CHECK_FALSE(g.is_connected("P4", "P2"));
  CHECK_FALSE(g.is_connected("P3", "P3"));  // no self edge unless loaded
  CHECK_FALSE(g.is_connected("nope", "P"));

  SiteGraph with_self;
  with_self.add_edge("X", "X");
  CHECK(with_self.is_connected("X", "X"));
}

TEST_CASE("distance matches exhaustive path enumeration") {
  const SiteGraph g = example_graph();
  CHECK(shortest_by_enumeration(g, "P", "P9") == 3);  // freeze the oracle
  CHECK(g.distance("P", "P9") == 3);
  CHECK(g.distance("P", "P") == 0);
  CHECK(g.distance("unknown", "unknown") == 0);
  CHECK_FALSE(g.distance("P3", "P9").has_value());  // no back edges
  CHECK_FALSE(g.distance("P9", "P").has_value());

  for (const auto& a : g.nodes()) {
    for (const auto& b : g.nodes()) {
      CHECK(g.distance(a, b) == shortest_by_enumeration(g, a, b));
    }
  }
}

TEST_CASE("distance agrees with enumeration on a cyclic graph") {
  SiteGraph g;
  g.add_edge("a", "b");
  g.add_edge("b", "c");
  g.add_edge("c", "a");
  g.add_edge("a", "c");
  g.add_edge("c", "d");
  for (const auto& a : g.nodes()) {
    for (const auto& b : g.nodes()) {
      CHECK(g.distance(a, b) == shortest_by_enumeration(g, a, b));
    }
  }
}

TEST_CASE("is_connected iff distance one") {
  const SiteGraph g = example_graph();
  for (const auto& a : g.nodes()) {
    for (const auto& b : g.nodes()) {
      if (a == b) continue;
      CHECK(g.is_connected(a, b) == (g.distance(a, b) == 1));
    }
  }
}

TEST_CASE("distances_to agrees with distance") {
  const SiteGraph g = example_graph();
  for (const auto& target : g.nodes()) {
    const auto dist = g.distances_to(target);
    for (const auto& from : g.nodes()) {
      const auto direct = g.distance(from, target);
      const auto it = dist.find(from);
      if (direct.has_value()) {
        REQUIRE(it != dist.end());
        CHECK(it->second == *direct);
      } else {
        CHECK(it == dist.end());
      }
    }
  }
}

namespace {

Session session_of(const std::vector<std::string>& pages, Instant start = 0) {
  Session s;
  s.client_key = "c";
  s.id = "c#0";
  Instant t = start;
  for (const auto& p : pages) {
    s.visits.push_back({p, t, 0, 0, false});
    t += 10;
  }
  return s;
}

}  // namespace

TEST_CASE("infer_edges_from_sessions counts session support") {
  CHECK(infer_edges_from_sessions({}, 1).node_count() == 0);

  const std::vector<Session> three = {
      session_of({"A", "B"}),
      session_of({"A", "B", "C"}),
      session_of({"X", "A", "B"}),
  };
  const SiteGraph g2 = infer_edges_from_sessions(three, 2);
  CHECK(g2.is_connected("A", "B"));
  CHECK_FALSE(g2.is_connected("B", "C"));  // support 1

  const std::vector<Session> once = {session_of({"A", "B"})};
  CHECK_FALSE(infer_edges_from_sessions(once, 2).is_connected("A", "B"));

  // repeats within one session count once
  const std::vector<Session> repeat = {session_of({"A", "B", "A", "B"})};
  CHECK_FALSE(infer_edges_from_sessions(repeat, 2).is_connected("A", "B"));
}

TEST_CASE("inferred graph with min_support 1 is a supergraph") {
  std::uint64_t state = 5;
  auto next = [&state] {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  std::vector<Session> sessions;
  for (int i = 0; i < 40; ++i) {
    std::vector<std::string> pages;
    const int len = 2 + static_cast<int>(next() % 6);
    for (int k = 0; k < len; ++k) {
      pages.push_back("/n" + std::to_string(next() % 8));
    }
    sessions.push_back(session_of(pages));
  }
  const SiteGraph base = infer_edges_from_sessions(sessions, 1);
  for (std::size_t support = 2; support <= 4; ++support) {
    const SiteGraph tighter = infer_edges_from_sessions(sessions, support);
    for (const auto& from : tighter.nodes()) {
      for (const auto& to : tighter.out_links(from)) {
        CHECK(base.is_connected(from, to));
      }
    }
    CHECK(tighter.edge_count() <= base.edge_count());
  }
}
