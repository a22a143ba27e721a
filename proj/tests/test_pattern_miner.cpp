#include "navmine/pattern_miner.hpp"

#include <limits>

#include "doctest.h"

using namespace navmine;

namespace {

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

Session session_of(const std::vector<std::pair<std::string, Seconds>>& visits) {
  Session s;
  s.client_key = "c";
  s.id = "c#0";
  Instant t = 0;
  for (const auto& [page, dwell] : visits) {
    PageVisit v;
    v.page = page;
    v.arrival = t;
    v.dwell = dwell;
    v.prior_site_time = static_cast<Seconds>(t);
    s.visits.push_back(std::move(v));
    t += static_cast<Instant>(dwell);
  }
  if (!s.visits.empty()) s.visits.back().dwell_estimated = true;
  return s;
}

}  // namespace

TEST_CASE("the example search session marks three IRLs and one DL") {
  // P -> P1 -> P3 -> P1 -> P4 -> P2 -> P5 -> P2 -> P6 -> P9
  const Session s = session_of({{"P", 5},
                                {"P1", 8},
                                {"P3", 10},
                                {"P1", 6},
                                {"P4", 12},
                                {"P2", 7},
                                {"P5", 9},
                                {"P2", 6},
                                {"P6", 8},
                                {"P9", 100}});
  std::map<std::string, Seconds> thresholds;
  for (const auto& v : s.visits) thresholds[v.page] = 30;  // all above dwells
  thresholds["P9"] = 30;  // P9 dwell 100 clears it

  const auto marks = mark_session(s, example_graph(), thresholds);
  REQUIRE(marks.size() == 10);
  CHECK(marks[0] == Mark::Transit);  // P
  CHECK(marks[1] == Mark::Transit);  // P1
  CHECK(marks[2] == Mark::Irl);      // P3: prev == next
  CHECK(marks[3] == Mark::Transit);  // P1
  CHECK(marks[4] == Mark::Irl);      // P4: no edge P4 -> P2
  CHECK(marks[5] == Mark::Transit);  // P2
  CHECK(marks[6] == Mark::Irl);      // P5: prev == next
  CHECK(marks[7] == Mark::Transit);  // P2
  CHECK(marks[8] == Mark::Transit);  // P6
  CHECK(marks[9] == Mark::Dl);       // P9: final, dwell over threshold

  MiningDiagnostics diag;
  const auto records = extract_records(s, marks, &diag);
  REQUIRE(records.size() == 1);
  CHECK(records[0].destination == "P9");
  CHECK(records[0].actual_location == "P6");
  CHECK(records[0].irls == std::vector<std::string>{"P3", "P4", "P5"});
  CHECK(records[0].session_ref == "c#0");
  CHECK(diag.abandoned_searches == 0);
}

TEST_CASE("a single-visit session is judged by the final-visit rule") {
  const Session s = session_of({{"P", 50}});
  std::map<std::string, Seconds> thresholds{{"P", 30}};
  const auto marks = mark_session(s, example_graph(), thresholds);
  REQUIRE(marks.size() == 1);
  CHECK(marks[0] == Mark::Dl);

  // below threshold the stopping point is an IRL
  const Session quick = session_of({{"P", 10}});
  CHECK(mark_session(quick, example_graph(), thresholds)[0] == Mark::Irl);

  // a DL at position 0 emits no record: there is no actual location
  MiningDiagnostics diag;
  CHECK(extract_records(s, marks, &diag).empty());
}

TEST_CASE("prev == next makes the middle visit a candidate") {
  const Session s = session_of({{"A", 5}, {"B", 10}, {"A", 20}});
  std::map<std::string, Seconds> thresholds{{"A", 100}, {"B", 50}};
  SiteGraph g;
  g.add_edge("A", "B");
  const auto marks = mark_session(s, g, thresholds);
  CHECK(marks[0] == Mark::Transit);
  CHECK(marks[1] == Mark::Irl);  // dwell 10 < 50
  CHECK(marks[2] == Mark::Irl);  // final visit, 20 < 100
}

TEST_CASE("missing thresholds mean never-DL") {
  const Session s = session_of({{"A", 5}, {"B", 1e9}, {"A", 20}});
  const auto marks = mark_session(s, SiteGraph{}, {});
  CHECK(marks[1] == Mark::Irl);  // candidate (prev==next, and no edge)
  CHECK(marks[2] == Mark::Irl);  // final
}

TEST_CASE("buffer semantics: each DL flushes the IRLs seen so far") {
  // visits a, x, b, y with marks IRL, DL, IRL, DL
  const Session s = session_of({{"a", 1}, {"x", 100}, {"b", 1}, {"y", 100}});
  const std::vector<Mark> marks = {Mark::Irl, Mark::Dl, Mark::Irl, Mark::Dl};
  const auto records = extract_records(s, marks);
  REQUIRE(records.size() == 2);
  CHECK(records[0].destination == "x");
  CHECK(records[0].actual_location == "a");
  CHECK(records[0].irls == std::vector<std::string>{"a"});
  CHECK(records[1].destination == "y");
  CHECK(records[1].actual_location == "b");
  CHECK(records[1].irls == std::vector<std::string>{"b"});
}

TEST_CASE("no DL, no records, one abandoned search") {
  const Session s = session_of({{"a", 1}, {"b", 1}, {"c", 1}});
  const std::vector<Mark> marks = {Mark::Transit, Mark::Irl, Mark::Irl};
  MiningDiagnostics diag;
  CHECK(extract_records(s, marks, &diag).empty());
  CHECK(diag.abandoned_searches == 1);

  // all-transit marks abandon nothing
  MiningDiagnostics diag2;
  const std::vector<Mark> transit = {Mark::Transit, Mark::Transit,
                                     Mark::Transit};
  CHECK(extract_records(s, transit, &diag2).empty());
  CHECK(diag2.abandoned_searches == 0);
}

TEST_CASE("the destination never appears in its own IRL list") {
  const Session s = session_of({{"a", 1}, {"x", 1}, {"a", 1}, {"x", 100}});
  const std::vector<Mark> marks = {Mark::Transit, Mark::Irl, Mark::Transit,
                                   Mark::Dl};
  const auto records = extract_records(s, marks);
  REQUIRE(records.size() == 1);
  CHECK(records[0].destination == "x");
  CHECK(records[0].irls.empty());
}

namespace {

Session random_session(std::uint64_t& state, const SiteGraph& g) {
  auto next = [&state] {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  const auto nodes = g.nodes();
  std::vector<std::pair<std::string, Seconds>> visits;
  const int len = 1 + static_cast<int>(next() % 12);
  for (int i = 0; i < len; ++i) {
    visits.emplace_back(nodes[next() % nodes.size()],
                        static_cast<Seconds>(1 + next() % 60));
  }
  // collapse accidental consecutive repeats the way sessionize would
  std::vector<std::pair<std::string, Seconds>> collapsed;
  for (auto& v : visits) {
    if (!collapsed.empty() && collapsed.back().first == v.first) continue;
    collapsed.push_back(v);
  }
  return session_of(collapsed);
}

}  // namespace

TEST_CASE("candidate soundness on random sessions") {
  const SiteGraph g = example_graph();
  std::map<std::string, Seconds> thresholds;
  for (const auto& n : g.nodes()) thresholds[n] = 25;

  std::uint64_t state = 77;
  for (int trial = 0; trial < 200; ++trial) {
    const Session s = random_session(state, g);
    const auto marks = mark_session(s, g, thresholds);
    REQUIRE(marks.size() == s.visits.size());

    for (std::size_t i = 0; i < marks.size(); ++i) {
      const bool interior = i > 0 && i + 1 < marks.size();
      if (i == 0 && marks.size() > 1) {
        CHECK(marks[0] == Mark::Transit);
      }
      if (interior && marks[i] == Mark::Transit) {
        // a transit interior visit always has prev != next and a real edge
        CHECK(s.visits[i - 1].page != s.visits[i + 1].page);
        CHECK(g.is_connected(s.visits[i].page, s.visits[i + 1].page));
      }
      if (marks[i] == Mark::Dl) {
        CHECK(s.visits[i].dwell >= thresholds[s.visits[i].page]);
      }
      if (marks[i] == Mark::Irl) {
        CHECK(s.visits[i].dwell < thresholds[s.visits[i].page]);
      }
    }

    // reference buffer walk, written independently of extract_records;
    // by construction every buffered IRL position precedes its record's DL
    const auto records = extract_records(s, marks);
    std::vector<PatternRecord> expected;
    std::vector<std::size_t> buffered;
    for (std::size_t i = 0; i < marks.size(); ++i) {
      if (marks[i] == Mark::Irl) buffered.push_back(i);
      if (marks[i] == Mark::Dl) {
        if (i > 0) {
          PatternRecord r;
          r.destination = s.visits[i].page;
          r.actual_location = s.visits[i - 1].page;
          for (std::size_t pos : buffered) {
            CHECK(pos < i);
            if (s.visits[pos].page != r.destination) {
              r.irls.push_back(s.visits[pos].page);
            }
          }
          r.session_ref = s.id;
          expected.push_back(std::move(r));
        }
        buffered.clear();
      }
    }
    CHECK(records == expected);

    // determinism
    CHECK(mark_session(s, g, thresholds) == marks);
    CHECK(extract_records(s, marks) == records);
  }
}

TEST_CASE("well-linked forward walks stay transit except the stop") {
  // every transition is a graph edge and no prev==next triple exists
  const Session s =
      session_of({{"P", 5}, {"P2", 5}, {"P6", 5}, {"P9", 100}});
  std::map<std::string, Seconds> thresholds;
  for (const auto& v : s.visits) thresholds[v.page] = 10;
  const auto marks = mark_session(s, example_graph(), thresholds);
  CHECK(marks[0] == Mark::Transit);
  CHECK(marks[1] == Mark::Transit);
  CHECK(marks[2] == Mark::Transit);
  CHECK(marks[3] == Mark::Dl);
}

TEST_CASE("mine_sessions output does not depend on the thread count") {
  const SiteGraph g = example_graph();
  std::map<std::string, Seconds> thresholds;
  for (const auto& n : g.nodes()) thresholds[n] = 25;

  std::uint64_t state = 31337;
  std::vector<Session> sessions;
  for (int i = 0; i < 120; ++i) {
    Session s = random_session(state, g);
    s.id = "c#" + std::to_string(i);
    sessions.push_back(std::move(s));
  }
  const MiningResult serial = mine_sessions(sessions, g, thresholds, 1);
  const MiningResult parallel = mine_sessions(sessions, g, thresholds, 4);
  CHECK(serial.records == parallel.records);
  CHECK(serial.diagnostics.abandoned_searches ==
        parallel.diagnostics.abandoned_searches);
}

TEST_CASE("records_to_csv emits ragged rows") {
  PatternRecord r1{"P9", "P6", {"P3", "P4", "P5"}, "s"};
  PatternRecord r2{"X", "Y", {}, "s"};
  CHECK(records_to_csv({r1, r2}) == "P9,P6,P3,P4,P5\nX,Y\n");
}
