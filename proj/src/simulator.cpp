#include "navmine/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

#include "navmine/log_ingest.hpp"

namespace navmine {

std::uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t Rng::uniform_index(std::size_t n) {
  return n == 0 ? 0 : static_cast<std::size_t>(uniform01() * static_cast<double>(n));
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

void UserPolicy::validate() const {
  if (!(wrong_choice_prob >= 0 && wrong_choice_prob <= 1)) {
    throw std::invalid_argument("wrong_choice_prob outside [0, 1]");
  }
  if (!(backtrack_prob >= 0 && backtrack_prob <= 1)) {
    throw std::invalid_argument("backtrack_prob outside [0, 1]");
  }
  if (give_up_steps <= 0) {
    throw std::invalid_argument("give_up_steps must be positive");
  }
  if (!(dwell_at_destination.mean > dwell_at_transit.mean)) {
    throw std::invalid_argument(
        "destination dwell mean must exceed transit dwell mean");
  }
}

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max();

int dist_or_max(const std::map<std::string, int>& dist,
                const std::string& page) {
  const auto it = dist.find(page);
  return it == dist.end() ? kUnreachable : it->second;
}

struct WalkVisit {
  std::string page;
  bool destination_arrival = false;
};

}  // namespace

SimResult simulate_session(const SiteGraph& graph,
                           const std::vector<std::string>& destinations,
                           const UserPolicy& policy, Instant start,
                           const std::string& client,
                           const std::string& session_id) {
  policy.validate();
  if (!graph.root()) {
    throw std::invalid_argument("simulate_session needs a graph root");
  }
  for (const auto& d : destinations) {
    if (!graph.has_node(d)) {
      throw std::invalid_argument("destination not in graph: " + d);
    }
  }

  Rng rng(policy.seed);
  SessionTruth truth;
  truth.session_id = session_id;
  truth.client = client;
  truth.destinations = destinations;
  truth.reached.assign(destinations.size(), false);

  std::vector<WalkVisit> walk{{*graph.root(), false}};
  std::vector<std::string> parents;  // path from root to current, exclusive
  std::set<std::string> reached_pages;
  std::set<std::string> planted;

  auto plant_irl = [&](const std::string& page) {
    // Leaving a page found as a destination is onward navigation, not a
    // failed attempt.
    if (reached_pages.count(page)) return;
    if (planted.insert(page).second) {
      truth.planted_irls.push_back(page);
    }
  };

  for (std::size_t di = 0; di < destinations.size(); ++di) {
    const std::string& target = destinations[di];
    const auto dist = graph.distances_to(target);
    int steps = 0;
    while (walk.back().page != target) {
      if (steps >= policy.give_up_steps) break;
      ++steps;

      const std::string current = walk.back().page;
      const auto& outs = graph.out_links(current);
      const int here = dist_or_max(dist, current);

      const std::string* best = nullptr;
      int best_dist = here;
      for (const std::string& link : outs) {
        const int d = dist_or_max(dist, link);
        if (d < best_dist) {
          best_dist = d;
          best = &link;
        }
      }

      if (best != nullptr) {
        const std::string* choice = best;
        if (outs.size() >= 2 && rng.uniform01() < policy.wrong_choice_prob) {
          // a uniformly random out-link other than the best one
          std::size_t pick = rng.uniform_index(outs.size() - 1);
          for (const std::string& link : outs) {
            if (&link == best) continue;
            if (pick == 0) {
              choice = &link;
              break;
            }
            --pick;
          }
        }
        parents.push_back(current);
        walk.push_back({*choice, false});
      } else if (!parents.empty() &&
                 (outs.empty() || rng.uniform01() < policy.backtrack_prob)) {
        plant_irl(current);
        walk.push_back({parents.back(), false});
        parents.pop_back();
      } else if (!outs.empty()) {
        // stuck but unwilling to backtrack: wander to a random link
        parents.push_back(current);
        walk.push_back({outs[rng.uniform_index(outs.size())], false});
      } else {
        break;  // nowhere to go at all
      }
    }
    if (walk.back().page == target) {
      truth.reached[di] = true;
      walk.back().destination_arrival = true;
      reached_pages.insert(target);
    }
  }

  // Dwells: destination arrivals draw from the destination distribution.
  // Whole-second arrivals keep the log round-trippable.
  Session session;
  session.client_key = client;
  session.id = session_id;
  Instant arrival = start;
  for (const WalkVisit& v : walk) {
    const DwellDistribution& dd = v.destination_arrival
                                      ? policy.dwell_at_destination
                                      : policy.dwell_at_transit;
    const double drawn = rng.uniform(dd.mean - dd.jitter, dd.mean + dd.jitter);
    const auto dwell =
        std::max<std::int64_t>(1, std::llround(std::max(0.0, drawn)));

    PageVisit visit;
    visit.page = v.page;
    visit.arrival = arrival;
    visit.dwell = static_cast<Seconds>(dwell);
    visit.prior_site_time = static_cast<Seconds>(arrival - start);
    visit.dwell_estimated = false;
    session.visits.push_back(std::move(visit));
    arrival += dwell;
  }
  return SimResult{std::move(session), std::move(truth)};
}

namespace {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  Rng r(master ^ (0x5851f42d4c957f2dULL * (index + 1)));
  return r.next();
}

std::string synthetic_client(std::size_t index) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "10.%zu.%zu.%zu", (index >> 16) & 255,
                (index >> 8) & 255, index & 255);
  return buf;
}

}  // namespace

Corpus generate_corpus(const SiteGraph& graph, std::size_t n_sessions,
                       const UserPolicy& policy, Instant clock_start,
                       const CorpusOptions& options) {
  policy.validate();
  if (n_sessions > 0 && !graph.root()) {
    throw std::invalid_argument("generate_corpus needs a graph root");
  }
  if (options.min_destinations < 1 ||
      options.max_destinations < options.min_destinations) {
    throw std::invalid_argument("bad destination count range");
  }

  std::vector<std::string> candidates;
  if (options.fixed_destinations.empty() && n_sessions > 0) {
    for (const std::string& page : graph.nodes()) {
      if (page != *graph.root()) candidates.push_back(page);
    }
    if (candidates.empty()) {
      throw std::invalid_argument("graph has no destination candidates");
    }
  }

  Corpus corpus;
  corpus.sessions.reserve(n_sessions);
  corpus.truth.reserve(n_sessions);

  struct LogLine {
    Instant t;
    std::size_t session;
    std::size_t visit;
    const PageVisit* pv;
    const std::string* client;
  };
  std::vector<LogLine> lines;

  for (std::size_t i = 0; i < n_sessions; ++i) {
    UserPolicy session_policy = policy;
    session_policy.seed = mix_seed(policy.seed, i);

    std::vector<std::string> dests = options.fixed_destinations;
    if (dests.empty()) {
      Rng pick(mix_seed(policy.seed ^ 0xd1b54a32d192ed03ULL, i));
      const int count =
          options.min_destinations +
          static_cast<int>(pick.uniform_index(static_cast<std::size_t>(
              options.max_destinations - options.min_destinations + 1)));
      for (int k = 0; k < count; ++k) {
        dests.push_back(candidates[pick.uniform_index(candidates.size())]);
      }
    }

    const std::string client = synthetic_client(i);
    const Instant start =
        clock_start + static_cast<Instant>(i) * options.session_spacing_seconds;
    SimResult r = simulate_session(graph, dests, session_policy, start,
                                   client, client + "#0");
    corpus.sessions.push_back(std::move(r.session));
    corpus.truth.push_back(std::move(r.truth));
  }

  for (std::size_t si = 0; si < corpus.sessions.size(); ++si) {
    const Session& s = corpus.sessions[si];
    for (std::size_t vi = 0; vi < s.visits.size(); ++vi) {
      lines.push_back(
          {s.visits[vi].arrival, si, vi, &s.visits[vi], &s.client_key});
    }
  }
  std::sort(lines.begin(), lines.end(), [](const LogLine& a, const LogLine& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.session != b.session) return a.session < b.session;
    return a.visit < b.visit;
  });

  corpus.log_text.reserve(lines.size() * 72);
  for (const LogLine& l : lines) {
    corpus.log_text += *l.client;
    corpus.log_text += " - - [";
    corpus.log_text += format_clf_time(l.t);
    corpus.log_text += "] \"GET ";
    corpus.log_text += l.pv->page;
    corpus.log_text += " HTTP/1.0\" 200 512\n";
  }
  corpus.truth_text = truth_to_text(corpus.truth);
  return corpus;
}

std::string truth_to_text(const std::vector<SessionTruth>& truth) {
  std::string out;
  for (const SessionTruth& t : truth) {
    out += t.session_id;
    out += '\t';
    out += t.client;
    out += '\t';
    for (std::size_t i = 0; i < t.destinations.size(); ++i) {
      if (i) out += ',';
      out += t.destinations[i];
    }
    out += '\t';
    for (std::size_t i = 0; i < t.reached.size(); ++i) {
      if (i) out += ',';
      out += t.reached[i] ? '1' : '0';
    }
    out += '\t';
    if (t.planted_irls.empty()) {
      out += '-';
    } else {
      for (std::size_t i = 0; i < t.planted_irls.size(); ++i) {
        if (i) out += ',';
        out += t.planted_irls[i];
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace navmine
