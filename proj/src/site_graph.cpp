#include "navmine/site_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace navmine {

namespace {
const std::vector<std::string> kNoLinks;
}

void SiteGraph::add_node(const std::string& page) {
  adjacency_.try_emplace(page);
}

void SiteGraph::add_edge(const std::string& from, const std::string& to) {
  add_node(to);
  auto& outs = adjacency_[from];
  const auto it = std::lower_bound(outs.begin(), outs.end(), to);
  if (it != outs.end() && *it == to) return;  // duplicate, ignore
  outs.insert(it, to);
}

bool SiteGraph::has_node(const std::string& page) const {
  return adjacency_.find(page) != adjacency_.end();
}

bool SiteGraph::is_connected(const std::string& from,
                             const std::string& to) const {
  const auto it = adjacency_.find(from);
  if (it == adjacency_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), to);
}

const std::vector<std::string>& SiteGraph::out_links(
    const std::string& page) const {
  const auto it = adjacency_.find(page);
  return it == adjacency_.end() ? kNoLinks : it->second;
}

std::optional<int> SiteGraph::distance(const std::string& from,
                                       const std::string& to) const {
  if (from == to) return 0;
  if (!has_node(from)) return std::nullopt;
  std::map<std::string, int> dist{{from, 0}};
  std::deque<const std::string*> queue{&from};
  while (!queue.empty()) {
    const std::string& page = *queue.front();
    queue.pop_front();
    const int next = dist[page] + 1;
    for (const std::string& link : out_links(page)) {
      if (link == to) return next;
      if (dist.emplace(link, next).second) {
        const auto it = adjacency_.find(link);
        if (it != adjacency_.end()) queue.push_back(&it->first);
      }
    }
  }
  return std::nullopt;
}

std::map<std::string, int> SiteGraph::distances_to(
    const std::string& to) const {
  std::map<std::string, std::vector<const std::string*>> reverse;
  for (const auto& [from, outs] : adjacency_) {
    for (const std::string& link : outs) {
      reverse[link].push_back(&from);
    }
  }
  std::map<std::string, int> dist{{to, 0}};
  std::deque<const std::string*> queue{&to};
  while (!queue.empty()) {
    const std::string& page = *queue.front();
    queue.pop_front();
    const int next = dist[page] + 1;
    const auto it = reverse.find(page);
    if (it == reverse.end()) continue;
    for (const std::string* from : it->second) {
      if (dist.emplace(*from, next).second) queue.push_back(from);
    }
  }
  return dist;
}

std::vector<std::string> SiteGraph::nodes() const {
  std::vector<std::string> out;
  out.reserve(adjacency_.size());
  for (const auto& [page, _] : adjacency_) out.push_back(page);
  return out;
}

std::size_t SiteGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [_, outs] : adjacency_) n += outs.size();
  return n;
}

void SiteGraph::set_root(const std::string& page) {
  add_node(page);
  root_ = page;
}

SiteGraph load_edge_list(std::istream& in) {
  SiteGraph g;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;  // blank line
    if (first[0] == '#') {
      std::string key, value;
      if (!g.root() && tokens >> key >> value && first == "#" &&
          key == "root") {
        g.set_root(value);
      }
      continue;
    }
    std::string second, extra;
    if (!(tokens >> second)) {
      throw BadEdgeLine(line_number, "expected two pages, got one");
    }
    if (tokens >> extra) {
      throw BadEdgeLine(line_number, "trailing token: " + extra);
    }
    g.add_edge(first, second);
  }
  return g;
}

SiteGraph infer_edges_from_sessions(const std::vector<Session>& sessions,
                                    std::size_t min_support) {
  std::map<std::pair<std::string, std::string>, std::size_t> support;
  for (const Session& s : sessions) {
    std::set<std::pair<std::string, std::string>> seen;  // once per session
    for (std::size_t i = 0; i + 1 < s.visits.size(); ++i) {
      seen.emplace(s.visits[i].page, s.visits[i + 1].page);
    }
    for (const auto& edge : seen) ++support[edge];
  }
  SiteGraph g;
  for (const auto& [edge, count] : support) {
    if (count >= min_support) g.add_edge(edge.first, edge.second);
  }
  return g;
}

}  // namespace navmine
