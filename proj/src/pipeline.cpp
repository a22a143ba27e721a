#include "navmine/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace navmine {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path);
  return buf.str();
}

std::string format_number(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failure on " + path.string());
}

void validate(const PipelineConfig& cfg, bool need_logs) {
  if (need_logs && cfg.log_paths.empty()) {
    throw ConfigError("no log files given");
  }
  for (const auto& p : cfg.log_paths) {
    if (!std::filesystem::exists(p)) {
      throw ConfigError("log file does not exist: " + p);
    }
  }
  if (!cfg.graph_path.empty() && !std::filesystem::exists(cfg.graph_path)) {
    throw ConfigError("graph file does not exist: " + cfg.graph_path);
  }
  if (!cfg.damping_file.empty() &&
      !std::filesystem::exists(cfg.damping_file)) {
    throw ConfigError("damping file does not exist: " + cfg.damping_file);
  }
  if (!(cfg.damping >= kMinDamping && cfg.damping <= kMaxDamping)) {
    throw ConfigError("damping outside [0.15, 0.85]");
  }
  if (cfg.timeout_seconds <= 0) {
    throw ConfigError("timeout must be positive");
  }
  if (cfg.threads < 1) {
    throw ConfigError("threads must be >= 1");
  }
  try {
    cfg.omega.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

MineResult mine_hits(const std::vector<Hit>& hits, const PipelineConfig& cfg,
                     const SiteGraph* graph_override, IngestStats stats) {
  MineResult result;
  result.ingest = stats;

  std::vector<Session> sessions =
      annotate_all(sessionize(hits, cfg.timeout_seconds), cfg.last_dwell);
  result.session_count = sessions.size();

  ThresholdConfig tcfg;
  tcfg.damping = cfg.damping;
  tcfg.include_estimated = cfg.include_estimated;
  if (!cfg.damping_file.empty()) {
    std::ifstream df(cfg.damping_file);
    if (!df) throw IoError("cannot open " + cfg.damping_file);
    try {
      tcfg.per_page_damping = load_damping_file(df);
    } catch (const std::runtime_error& e) {
      throw ConfigError(e.what());
    }
  }
  result.thresholds = compute_thresholds(collect_samples(sessions), tcfg);

  SiteGraph loaded;
  const SiteGraph* graph = graph_override;
  if (graph == nullptr) {
    if (!cfg.graph_path.empty()) {
      std::ifstream gf(cfg.graph_path);
      if (!gf) throw IoError("cannot open " + cfg.graph_path);
      try {
        loaded = load_edge_list(gf);
      } catch (const BadEdgeLine& e) {
        throw ConfigError(cfg.graph_path + ": " + e.what());
      }
    } else {
      loaded = infer_edges_from_sessions(sessions, cfg.infer_min_support);
    }
    graph = &loaded;
  }

  MiningResult mined = mine_sessions(sessions, *graph,
                                     threshold_times(result.thresholds),
                                     cfg.threads);
  result.records = std::move(mined.records);
  result.diagnostics = mined.diagnostics;

  result.analyses = analyze_destinations(result.records, cfg.omega);
  for (const auto& [destination, analysis] : result.analyses) {
    result.recommendations.emplace(destination, analysis.recommendation);
  }
  result.truncated_records =
      truncate_all(result.records, result.recommendations);

  if (cfg.emit == EmitFormat::Csv) {
    result.records_table = records_to_csv(result.records);
    result.truncated_table = records_to_csv(result.truncated_records);
    result.recommendation_report = recommendations_to_csv(result.analyses);
  } else {
    result.records_table = records_to_text(result.records);
    result.truncated_table = records_to_text(result.truncated_records);
    result.recommendation_report = recommendations_to_text(result.analyses);
  }

  std::ostringstream summary;
  summary << "lines: " << result.ingest.lines << "\n"
          << "malformed_lines: " << result.ingest.malformed << "\n"
          << "hits_kept: " << result.ingest.kept << "\n"
          << "sessions: " << result.session_count << "\n"
          << "pattern_records: " << result.records.size() << "\n"
          << "abandoned_searches: " << result.diagnostics.abandoned_searches
          << "\n"
          << "destinations: " << result.recommendations.size() << "\n"
          << "thresholds:\n";
  for (const auto& [page, t] : result.thresholds) {
    summary << "  " << page << "\t" << format_number(t.threshold) << "\t"
            << t.sample_count << "\t" << format_number(t.damping) << "\n";
  }
  result.summary_text = summary.str();

  if (!cfg.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create " + cfg.out_dir);
    const char* ext = cfg.emit == EmitFormat::Csv ? "csv" : "txt";
    write_file(cfg.out_dir, std::string("records.") + ext,
               result.records_table);
    write_file(cfg.out_dir, std::string("records_truncated.") + ext,
               result.truncated_table);
    write_file(cfg.out_dir, std::string("recommendations.") + ext,
               result.recommendation_report);
    write_file(cfg.out_dir, "summary.txt", result.summary_text);
  }
  return result;
}

}  // namespace

MineResult run_mine(const PipelineConfig& cfg) {
  validate(cfg, /*need_logs=*/true);

  IngestStats stats;
  std::vector<Hit> hits;
  for (const auto& path : cfg.log_paths) {
    const std::string text = slurp(path);
    std::vector<Hit> part = read_log_text(text, cfg.format, cfg.filter, stats,
                                          cfg.key_user_agent, cfg.threads);
    if (hits.empty()) {
      hits = std::move(part);
    } else {
      hits.insert(hits.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
    }
  }
  return mine_hits(hits, cfg, nullptr, stats);
}

MineResult mine_log_text(std::string_view log_text, PipelineConfig cfg,
                         const SiteGraph* graph) {
  cfg.log_paths.clear();
  validate(cfg, /*need_logs=*/false);
  IngestStats stats;
  const std::vector<Hit> hits = read_log_text(
      log_text, cfg.format, cfg.filter, stats, cfg.key_user_agent, cfg.threads);
  return mine_hits(hits, cfg, graph, stats);
}

std::vector<PathHitRow> emit_path_hit_counts(
    const std::vector<Session>& sessions, const std::string& page) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
  bool seen = false;
  for (const Session& s : sessions) {
    for (std::size_t i = 0; i < s.visits.size(); ++i) {
      if (s.visits[i].page != page) continue;
      seen = true;
      const std::string predecessor =
          i == 0 ? "(entry)" : s.visits[i - 1].page;
      ++counts[{predecessor, month_key(s.visits[i].arrival)}];
    }
  }
  if (!seen) throw UnknownPage(page);

  std::vector<PathHitRow> rows;
  rows.reserve(counts.size());
  for (const auto& [key, count] : counts) {
    rows.push_back({key.first, key.second, count});
  }
  return rows;
}

std::string path_hits_to_csv(const std::vector<PathHitRow>& rows) {
  std::string out = "predecessor,month,count\n";
  for (const PathHitRow& r : rows) {
    out += csv_field(r.predecessor);
    out += ',';
    out += r.month;
    out += ',';
    out += std::to_string(r.count);
    out += '\n';
  }
  return out;
}

std::string recommendations_to_csv(
    const std::map<std::string, DestinationAnalysis>& analyses) {
  std::string out = "destination,s_p,page,beta,recommended,is_top\n";
  for (const auto& [destination, a] : analyses) {
    const RecommendationSet& rec = a.recommendation;
    if (a.beta.beta.empty()) {
      out += csv_field(destination) + ",0,-,-,0,0\n";
      continue;
    }
    for (const auto& [page, beta] : a.beta.beta) {
      out += csv_field(destination);
      out += ',';
      out += format_number(rec.s_p);
      out += ',';
      out += csv_field(page);
      out += ',';
      out += format_number(beta);
      out += ',';
      out += rec.recommended.count(page) ? '1' : '0';
      out += ',';
      out += page == rec.top_candidate ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

std::string recommendations_to_text(
    const std::map<std::string, DestinationAnalysis>& analyses) {
  std::ostringstream out;
  for (const auto& [destination, a] : analyses) {
    const RecommendationSet& rec = a.recommendation;
    out << "destination " << destination << "  (records: " << a.record_count
        << ", s_p: " << format_number(rec.s_p) << ")\n";
    out << "  actual locations:";
    for (const auto& al : rec.actual_locations) out << ' ' << al;
    out << '\n';
    for (const auto& [page, beta] : a.beta.beta) {
      out << "  " << page << "  beta=" << format_number(beta);
      if (rec.recommended.count(page)) out << "  recommended";
      if (page == rec.top_candidate) out << "  top";
      out << '\n';
    }
    for (const auto& page : rec.recommended) {
      out << "  add link: " << page << " -> " << destination << '\n';
    }
    out << '\n';
  }
  return out.str();
}

std::string records_to_text(const std::vector<PatternRecord>& records) {
  std::ostringstream out;
  for (const PatternRecord& r : records) {
    out << r.destination << " <- " << r.actual_location << " | tried:";
    if (r.irls.empty()) {
      out << " (none)";
    } else {
      for (const auto& irl : r.irls) out << ' ' << irl;
    }
    out << "  [" << r.session_ref << "]\n";
  }
  return out.str();
}

std::string thresholds_to_csv(
    const std::map<std::string, PageThreshold>& thresholds) {
  std::string out = "page,threshold_seconds,samples,damping\n";
  for (const auto& [page, t] : thresholds) {
    out += csv_field(page);
    out += ',';
    out += format_number(t.threshold);
    out += ',';
    out += std::to_string(t.sample_count);
    out += ',';
    out += format_number(t.damping);
    out += '\n';
  }
  return out;
}

}  // namespace navmine
