#ifndef NAVMINE_PATTERN_MINER_HPP
#define NAVMINE_PATTERN_MINER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "navmine/sessionizer.hpp"
#include "navmine/site_graph.hpp"

namespace navmine {

enum class Mark { Transit, Irl, Dl };

const char* mark_name(Mark m);

// One mined row: the destination the user was after, the page that actually
// linked to it, and the pages tried (and abandoned) along the way, in
// attempt order.
struct PatternRecord {
  std::string destination;
  std::string actual_location;
  std::vector<std::string> irls;
  std::string session_ref;

  bool operator==(const PatternRecord&) const = default;
};

// Classifies every visit of an annotated session.
//
// An interior visit is a candidate when the previous and next pages
// coincide (a backtrack) or when the site graph has no link from it to the
// next page; the final visit, where the user stopped, is always a
// candidate. Candidates are destinations when their dwell reaches the
// page's threshold and intermediate reference locations otherwise.
// Everything else is plain transit. Pages missing from `thresholds` have an
// infinite threshold and can never be destinations.
std::vector<Mark> mark_session(const Session& session, const SiteGraph& graph,
                               const std::map<std::string, Seconds>& thresholds);

struct MiningDiagnostics {
  std::uint64_t abandoned_searches = 0;  // sessions whose IRL buffer never
                                         // reached a destination
};

// Folds marks into (destination, actual location, IRL list) records:
// IRL pages buffer up until a destination flushes them into a record.
std::vector<PatternRecord> extract_records(const Session& session,
                                           const std::vector<Mark>& marks,
                                           MiningDiagnostics* diagnostics = nullptr);

struct MiningResult {
  std::vector<PatternRecord> records;
  MiningDiagnostics diagnostics;
};

// mark_session + extract_records over every session; `threads` > 1 shards
// by session ranges without changing the output order.
MiningResult mine_sessions(const std::vector<Session>& sessions,
                           const SiteGraph& graph,
                           const std::map<std::string, Seconds>& thresholds,
                           int threads = 1);

// `destination,actual_location,irl_1,irl_2,...` with ragged rows.
std::string records_to_csv(const std::vector<PatternRecord>& records);

// Quotes a value for CSV output when it needs it.
std::string csv_field(std::string_view value);

}  // namespace navmine

#endif  // NAVMINE_PATTERN_MINER_HPP
