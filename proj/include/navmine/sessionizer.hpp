#ifndef NAVMINE_SESSIONIZER_HPP
#define NAVMINE_SESSIONIZER_HPP

#include <string>
#include <vector>

#include "navmine/clock.hpp"

namespace navmine {

// One page request after filtering, ready for session grouping.
struct Hit {
  std::string client_key;  // address, optionally + user agent
  Instant timestamp = 0;
  std::string page;
};

struct PageVisit {
  std::string page;
  Instant arrival = 0;
  Seconds dwell = 0;             // t: time until the next visit
  Seconds prior_site_time = 0;   // T: time in the session before this visit
  bool dwell_estimated = false;  // true exactly for the final visit
};

struct Session {
  std::string client_key;
  std::string id;  // opaque, "<client>#<n>"
  std::vector<PageVisit> visits;
};

// Policy for the unknowable dwell of a session's final visit.
struct LastDwellPolicy {
  enum class Kind { SessionMean, Constant };
  Kind kind = Kind::SessionMean;
  Seconds constant = 30.0;

  static LastDwellPolicy session_mean() { return {}; }
  static LastDwellPolicy constant_of(Seconds s) {
    return {Kind::Constant, s};
  }
};

// Groups hits into per-client sessions split on inactivity gaps larger than
// `timeout_seconds`, collapsing consecutive reloads of the same page.
// Sessions come out sorted by (first arrival, client key); visits carry
// arrivals only -- run annotate_times to fill dwell and prior-site time.
std::vector<Session> sessionize(const std::vector<Hit>& hits,
                                std::int64_t timeout_seconds);

// Fills dwell t, prior-site time T and the estimated flag for every visit.
Session annotate_times(Session session, const LastDwellPolicy& policy);

std::vector<Session> annotate_all(std::vector<Session> sessions,
                                  const LastDwellPolicy& policy);

}  // namespace navmine

#endif  // NAVMINE_SESSIONIZER_HPP
