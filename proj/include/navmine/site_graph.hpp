#ifndef NAVMINE_SITE_GRAPH_HPP
#define NAVMINE_SITE_GRAPH_HPP

#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "navmine/sessionizer.hpp"

namespace navmine {

class BadEdgeLine : public std::runtime_error {
 public:
  BadEdgeLine(std::size_t line_number, const std::string& what)
      : std::runtime_error("edge list line " + std::to_string(line_number) +
                           ": " + what),
        line_number(line_number) {}
  std::size_t line_number;
};

// Directed page-link graph. Immutable once loaded; out-links are kept
// sorted so every traversal over them is deterministic.
class SiteGraph {
 public:
  void add_node(const std::string& page);
  void add_edge(const std::string& from, const std::string& to);

  bool has_node(const std::string& page) const;
  bool is_connected(const std::string& from, const std::string& to) const;

  // Shortest directed path length in hops; nullopt when unreachable.
  // distance(a, a) is 0 for any page, known or not.
  std::optional<int> distance(const std::string& from,
                              const std::string& to) const;

  const std::vector<std::string>& out_links(const std::string& page) const;

  // Hop counts toward `to` for every page that can reach it, found by a
  // reverse breadth-first search. The simulator's greedy walk keys on this.
  std::map<std::string, int> distances_to(const std::string& to) const;

  std::vector<std::string> nodes() const;  // sorted
  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const;

  const std::optional<std::string>& root() const { return root_; }
  void set_root(const std::string& page);

 private:
  std::map<std::string, std::vector<std::string>> adjacency_;
  std::optional<std::string> root_;
};

// Reads `from to` pairs (tab or space separated), one per line. `#` opens a
// comment; a `# root <page>` comment declares the root. Duplicate edges are
// ignored; a line with the wrong token count raises BadEdgeLine.
SiteGraph load_edge_list(std::istream& in);

// Fallback when no sitemap exists: an edge for every consecutive-visit pair
// observed in at least `min_support` distinct sessions.
SiteGraph infer_edges_from_sessions(const std::vector<Session>& sessions,
                                    std::size_t min_support);

}  // namespace navmine

#endif  // NAVMINE_SITE_GRAPH_HPP
