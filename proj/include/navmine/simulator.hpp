#ifndef NAVMINE_SIMULATOR_HPP
#define NAVMINE_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "navmine/sessionizer.hpp"
#include "navmine/site_graph.hpp"

namespace navmine {

// Tiny deterministic generator (splitmix64). The standard distributions are
// implementation-defined, so seeded corpora would not be reproducible
// across library versions; this keeps byte-identical output everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double uniform01();  // [0, 1)
  std::size_t uniform_index(std::size_t n);
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

struct DwellDistribution {
  Seconds mean = 10;
  Seconds jitter = 2;  // uniform in [mean - jitter, mean + jitter]
};

struct UserPolicy {
  double wrong_choice_prob = 0.3;  // epsilon: chance of a non-optimal link
  double backtrack_prob = 0.9;     // chance of returning to the path parent
  int give_up_steps = 30;          // moves before abandoning a destination
  DwellDistribution dwell_at_transit{10, 2};
  DwellDistribution dwell_at_destination{120, 30};
  std::uint64_t seed = 1;

  // Destination dwell must dominate transit dwell or thresholds cannot
  // separate the two.
  void validate() const;
};

struct SessionTruth {
  std::string session_id;
  std::string client;
  std::vector<std::string> destinations;  // in seek order
  std::vector<bool> reached;              // aligned; false = gave up
  std::vector<std::string> planted_irls;  // pages backtracked from, unique,
                                          // in first-backtrack order
};

struct SimResult {
  Session session;
  SessionTruth truth;
};

// Walks the graph from the root seeking each destination in turn: with
// probability 1-epsilon takes the out-link closest to the target, otherwise
// a random other link; with no improving link it backtracks to the path
// parent with backtrack_prob (recording the abandoned page), else re-picks
// at random. After give_up_steps moves the destination is abandoned and the
// next one is sought. Fixed seed, fixed output.
SimResult simulate_session(const SiteGraph& graph,
                           const std::vector<std::string>& destinations,
                           const UserPolicy& policy, Instant start = 0,
                           const std::string& client = "sim",
                           const std::string& session_id = "sim#0");

struct CorpusOptions {
  int min_destinations = 2;
  int max_destinations = 4;
  std::int64_t session_spacing_seconds = 60;  // between session starts
  // When non-empty every session seeks exactly these pages in order;
  // otherwise destinations are drawn uniformly from the non-root nodes.
  std::vector<std::string> fixed_destinations;
};

struct Corpus {
  std::string log_text;    // common-format lines, time-ordered
  std::string truth_text;  // one line per session
  std::vector<SessionTruth> truth;
  std::vector<Session> sessions;  // the simulated ground-truth sessions
};

// Synthesizes a whole access log with per-session ground truth. Sessions
// get unique synthetic clients and seeds derived from policy.seed, so the
// output is reproducible and independent of generation order.
Corpus generate_corpus(const SiteGraph& graph, std::size_t n_sessions,
                       const UserPolicy& policy, Instant clock_start,
                       const CorpusOptions& options = {});

// session id, client, destinations, reached flags, planted IRLs.
std::string truth_to_text(const std::vector<SessionTruth>& truth);

}  // namespace navmine

#endif  // NAVMINE_SIMULATOR_HPP
