#ifndef NAVMINE_PIPELINE_HPP
#define NAVMINE_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "navmine/log_ingest.hpp"
#include "navmine/optimizer.hpp"
#include "navmine/pattern_miner.hpp"
#include "navmine/sessionizer.hpp"
#include "navmine/site_graph.hpp"
#include "navmine/threshold_model.hpp"

namespace navmine {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

class UnknownPage : public std::runtime_error {
 public:
  explicit UnknownPage(const std::string& page)
      : std::runtime_error("page never visited: " + page) {}
};

enum class EmitFormat { Csv, Text };

struct PipelineConfig {
  std::vector<std::string> log_paths;
  LogFormat format = LogFormat::Common;
  std::string graph_path;      // empty: infer edges from the sessions
  std::size_t infer_min_support = 1;
  std::int64_t timeout_seconds = 30 * 60;
  double damping = 0.5;
  std::string damping_file;    // optional per-page overrides
  OmegaWeights omega;
  LastDwellPolicy last_dwell;
  FilterConfig filter;
  bool key_user_agent = false;
  bool include_estimated = true;
  std::string out_dir;         // empty: keep everything in memory
  EmitFormat emit = EmitFormat::Csv;
  int threads = 1;
};

struct MineResult {
  IngestStats ingest;
  std::size_t session_count = 0;
  std::map<std::string, PageThreshold> thresholds;
  std::vector<PatternRecord> records;
  std::vector<PatternRecord> truncated_records;
  std::map<std::string, DestinationAnalysis> analyses;
  std::map<std::string, RecommendationSet> recommendations;
  MiningDiagnostics diagnostics;

  std::string records_table;      // per cfg.emit
  std::string truncated_table;
  std::string recommendation_report;
  std::string summary_text;
};

// The whole pipeline: parse -> filter -> sessionize -> thresholds -> mark ->
// records -> recommendations. Writes report files under cfg.out_dir when
// set. Throws ConfigError for bad configuration and IoError for filesystem
// failures.
MineResult run_mine(const PipelineConfig& cfg);

// In-memory variant used by tests and the simulator round trip.
MineResult mine_log_text(std::string_view log_text, PipelineConfig cfg,
                         const SiteGraph* graph = nullptr);

struct PathHitRow {
  std::string predecessor;  // "(entry)" for session-opening visits
  std::string month;        // "YYYY-MM", UTC
  std::uint64_t count = 0;
};

// Monthly visit counts for one destination page, grouped by the page the
// visitor came from. Throws UnknownPage when the page occurs in no session.
std::vector<PathHitRow> emit_path_hit_counts(
    const std::vector<Session>& sessions, const std::string& page);

std::string path_hits_to_csv(const std::vector<PathHitRow>& rows);

std::string recommendations_to_csv(
    const std::map<std::string, DestinationAnalysis>& analyses);
std::string recommendations_to_text(
    const std::map<std::string, DestinationAnalysis>& analyses);
std::string records_to_text(const std::vector<PatternRecord>& records);
std::string thresholds_to_csv(
    const std::map<std::string, PageThreshold>& thresholds);

}  // namespace navmine

#endif  // NAVMINE_PIPELINE_HPP
