#include "navmine/sessionizer.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace navmine {

namespace {

// Splits one client's time-ordered hits on the inactivity timeout, then
// merges consecutive reloads of the same page inside each session.
void emit_client_sessions(const std::string& client,
                          const std::vector<const Hit*>& hits,
                          std::int64_t timeout_seconds,
                          std::vector<Session>& out) {
  std::size_t session_index = 0;
  std::size_t begin = 0;
  while (begin < hits.size()) {
    std::size_t end = begin + 1;
    while (end < hits.size() &&
           hits[end]->timestamp - hits[end - 1]->timestamp <=
               timeout_seconds) {
      ++end;
    }
    Session s;
    s.client_key = client;
    s.id = client + "#" + std::to_string(session_index++);
    for (std::size_t i = begin; i < end; ++i) {
      if (!s.visits.empty() && s.visits.back().page == hits[i]->page) {
        continue;  // reload, keep the first arrival
      }
      PageVisit v;
      v.page = hits[i]->page;
      v.arrival = hits[i]->timestamp;
      s.visits.push_back(std::move(v));
    }
    out.push_back(std::move(s));
    begin = end;
  }
}

}  // namespace

std::vector<Session> sessionize(const std::vector<Hit>& hits,
                                std::int64_t timeout_seconds) {
  std::unordered_map<std::string, std::vector<const Hit*>> by_client;
  std::vector<const std::string*> client_order;
  for (const Hit& h : hits) {
    auto [it, inserted] = by_client.try_emplace(h.client_key);
    if (inserted) client_order.push_back(&it->first);
    it->second.push_back(&h);
  }

  std::vector<Session> sessions;
  for (const std::string* client : client_order) {
    auto& client_hits = by_client[*client];
    std::stable_sort(client_hits.begin(), client_hits.end(),
                     [](const Hit* a, const Hit* b) {
                       return a->timestamp < b->timestamp;
                     });
    emit_client_sessions(*client, client_hits, timeout_seconds, sessions);
  }

  std::sort(sessions.begin(), sessions.end(),
            [](const Session& a, const Session& b) {
              const Instant ta = a.visits.front().arrival;
              const Instant tb = b.visits.front().arrival;
              if (ta != tb) return ta < tb;
              return a.id < b.id;
            });
  return sessions;
}

Session annotate_times(Session session, const LastDwellPolicy& policy) {
  auto& visits = session.visits;
  if (visits.empty()) return session;

  const Instant start = visits.front().arrival;
  for (std::size_t i = 0; i + 1 < visits.size(); ++i) {
    visits[i].dwell =
        static_cast<Seconds>(visits[i + 1].arrival - visits[i].arrival);
    visits[i].dwell_estimated = false;
    visits[i].prior_site_time = static_cast<Seconds>(visits[i].arrival - start);
  }

  PageVisit& last = visits.back();
  last.prior_site_time = static_cast<Seconds>(last.arrival - start);
  last.dwell_estimated = true;
  switch (policy.kind) {
    case LastDwellPolicy::Kind::Constant:
      last.dwell = policy.constant;
      break;
    case LastDwellPolicy::Kind::SessionMean:
      if (visits.size() < 2) {
        last.dwell = 30.0;  // no other dwells to average
      } else {
        Seconds sum = 0;
        for (std::size_t i = 0; i + 1 < visits.size(); ++i) {
          sum += visits[i].dwell;
        }
        last.dwell = sum / static_cast<Seconds>(visits.size() - 1);
      }
      break;
  }
  return session;
}

std::vector<Session> annotate_all(std::vector<Session> sessions,
                                  const LastDwellPolicy& policy) {
  for (auto& s : sessions) {
    s = annotate_times(std::move(s), policy);
  }
  return sessions;
}

}  // namespace navmine
