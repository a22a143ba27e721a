#include "navmine/pattern_miner.hpp"

#include <algorithm>
#include <limits>
#include <thread>

namespace navmine {

const char* mark_name(Mark m) {
  switch (m) {
    case Mark::Transit: return "TRANSIT";
    case Mark::Irl: return "IRL";
    case Mark::Dl: return "DL";
  }
  return "?";
}

namespace {

Seconds threshold_of(const std::map<std::string, Seconds>& thresholds,
                     const std::string& page) {
  const auto it = thresholds.find(page);
  return it == thresholds.end() ? std::numeric_limits<Seconds>::infinity()
                                : it->second;
}

}  // namespace

std::vector<Mark> mark_session(
    const Session& session, const SiteGraph& graph,
    const std::map<std::string, Seconds>& thresholds) {
  const auto& visits = session.visits;
  std::vector<Mark> marks(visits.size(), Mark::Transit);
  if (visits.empty()) return marks;

  const std::size_t last = visits.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    bool candidate = false;
    if (i == last) {
      candidate = true;  // the stopping point is always evaluated
    } else if (i > 0) {
      const bool backtrack = visits[i - 1].page == visits[i + 1].page;
      const bool linked = graph.is_connected(visits[i].page, visits[i + 1].page);
      candidate = backtrack || !linked;
    }
    if (candidate) {
      marks[i] = visits[i].dwell >= threshold_of(thresholds, visits[i].page)
                     ? Mark::Dl
                     : Mark::Irl;
    }
  }
  return marks;
}

std::vector<PatternRecord> extract_records(const Session& session,
                                           const std::vector<Mark>& marks,
                                           MiningDiagnostics* diagnostics) {
  std::vector<PatternRecord> records;
  std::vector<std::string> buffer;
  for (std::size_t i = 0; i < marks.size(); ++i) {
    switch (marks[i]) {
      case Mark::Transit:
        break;
      case Mark::Irl:
        buffer.push_back(session.visits[i].page);
        break;
      case Mark::Dl: {
        if (i == 0) break;  // no preceding page to credit
        PatternRecord r;
        r.destination = session.visits[i].page;
        r.actual_location = session.visits[i - 1].page;
        for (std::string& page : buffer) {
          if (page != r.destination) r.irls.push_back(std::move(page));
        }
        r.session_ref = session.id;
        buffer.clear();
        records.push_back(std::move(r));
        break;
      }
    }
  }
  if (!buffer.empty() && diagnostics) {
    ++diagnostics->abandoned_searches;
  }
  return records;
}

MiningResult mine_sessions(const std::vector<Session>& sessions,
                           const SiteGraph& graph,
                           const std::map<std::string, Seconds>& thresholds,
                           int threads) {
  MiningResult result;
  if (sessions.empty()) return result;

  const std::size_t n = sessions.size();
  const std::size_t shards =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, n));

  std::vector<std::vector<PatternRecord>> shard_records(shards);
  std::vector<MiningDiagnostics> shard_diag(shards);

  auto work = [&](std::size_t shard) {
    const std::size_t lo = n * shard / shards;
    const std::size_t hi = n * (shard + 1) / shards;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto marks = mark_session(sessions[i], graph, thresholds);
      auto recs = extract_records(sessions[i], marks, &shard_diag[shard]);
      shard_records[shard].insert(shard_records[shard].end(),
                                  std::make_move_iterator(recs.begin()),
                                  std::make_move_iterator(recs.end()));
    }
  };

  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(shards);
    for (std::size_t s = 0; s < shards; ++s) workers.emplace_back(work, s);
    for (auto& w : workers) w.join();
  }

  for (std::size_t s = 0; s < shards; ++s) {
    result.records.insert(result.records.end(),
                          std::make_move_iterator(shard_records[s].begin()),
                          std::make_move_iterator(shard_records[s].end()));
    result.diagnostics.abandoned_searches +=
        shard_diag[s].abandoned_searches;
  }
  return result;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(value);
  }
  std::string out;
  out.reserve(value.size() + 2);
  out += '"';
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string records_to_csv(const std::vector<PatternRecord>& records) {
  std::string out;
  for (const PatternRecord& r : records) {
    out += csv_field(r.destination);
    out += ',';
    out += csv_field(r.actual_location);
    for (const std::string& irl : r.irls) {
      out += ',';
      out += csv_field(irl);
    }
    out += '\n';
  }
  return out;
}

}  // namespace navmine
