// Command-line front end: mine, simulate, thresholds, report.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "navmine/pipeline.hpp"
#include "navmine/simulator.hpp"

namespace {

using namespace navmine;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

LogFormat parse_format(const std::string& name) {
  if (name == "common") return LogFormat::Common;
  if (name == "combined") return LogFormat::Combined;
  throw ConfigError("unknown log format: " + name);
}

LastDwellPolicy parse_last_dwell(const std::string& value) {
  if (value == "mean") return LastDwellPolicy::session_mean();
  if (value.rfind("const:", 0) == 0) {
    const std::string seconds = value.substr(6);
    try {
      return LastDwellPolicy::constant_of(std::stod(seconds));
    } catch (const std::exception&) {
      throw ConfigError("bad duration in --last-dwell: " + seconds);
    }
  }
  throw ConfigError("--last-dwell expects `mean` or `const:<sec>`");
}

std::vector<double> parse_csv_doubles(const std::string& csv,
                                      const char* flag) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const auto comma = csv.find(',', pos);
    const std::string field =
        csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      out.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad number in ") + flag + ": " + field);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct MineFlags {
  std::vector<std::string> logs;
  std::string format = "common";
  double timeout_minutes = 30;
  double damping = 0.5;
  std::string damping_file;
  std::string omega = "1,0.75,0.5,0.25";
  std::string omega_overflow = "repeat";
  std::string graph;
  std::string last_dwell = "mean";
  std::string out_dir;
  std::string emit = "csv";
  bool key_user_agent = false;
  bool exclude_estimated = false;
  bool keep_query = false;
  std::size_t min_support = 1;
  int threads = 1;
};

void add_mine_flags(CLI::App* cmd, MineFlags& f, bool with_optimizer) {
  cmd->add_option("logs", f.logs, "access log file(s)")->required();
  cmd->add_option("--format", f.format, "log format: common|combined");
  cmd->add_option("--timeout", f.timeout_minutes,
                  "session inactivity timeout, minutes");
  cmd->add_option("--damping", f.damping, "global damping factor d");
  cmd->add_option("--damping-file", f.damping_file,
                  "per-page damping overrides (page<TAB>d)");
  cmd->add_option("--last-dwell", f.last_dwell,
                  "final-visit dwell policy: mean|const:<sec>");
  cmd->add_flag("--key-user-agent", f.key_user_agent,
                "include the user agent in the client key");
  cmd->add_flag("--exclude-estimated", f.exclude_estimated,
                "drop estimated dwells from threshold samples");
  cmd->add_flag("--keep-query", f.keep_query,
                "keep query strings in page identifiers");
  cmd->add_option("--threads", f.threads, "worker threads");
  if (with_optimizer) {
    cmd->add_option("--graph", f.graph, "site edge-list file");
    cmd->add_option("--min-support", f.min_support,
                    "session support for inferred edges (no --graph)");
    cmd->add_option("--omega", f.omega, "IRL position weights, csv");
    cmd->add_option("--omega-overflow", f.omega_overflow,
                    "weight past the omega vector: repeat|zero");
    cmd->add_option("--out", f.out_dir, "report output directory");
    cmd->add_option("--emit", f.emit, "report format: csv|text");
  }
}

PipelineConfig to_config(const MineFlags& f) {
  PipelineConfig cfg;
  cfg.log_paths = f.logs;
  cfg.format = parse_format(f.format);
  if (f.timeout_minutes <= 0) throw ConfigError("--timeout must be positive");
  cfg.timeout_seconds = static_cast<std::int64_t>(f.timeout_minutes * 60.0);
  cfg.damping = f.damping;
  cfg.damping_file = f.damping_file;
  cfg.omega.weights = parse_csv_doubles(f.omega, "--omega");
  if (f.omega_overflow == "repeat") {
    cfg.omega.overflow = OmegaWeights::Overflow::RepeatLast;
  } else if (f.omega_overflow == "zero") {
    cfg.omega.overflow = OmegaWeights::Overflow::Zero;
  } else {
    throw ConfigError("--omega-overflow expects repeat|zero");
  }
  cfg.graph_path = f.graph;
  cfg.infer_min_support = f.min_support;
  cfg.last_dwell = parse_last_dwell(f.last_dwell);
  cfg.key_user_agent = f.key_user_agent;
  cfg.include_estimated = !f.exclude_estimated;
  cfg.filter.strip_query = !f.keep_query;
  cfg.out_dir = f.out_dir;
  if (f.emit == "csv") {
    cfg.emit = EmitFormat::Csv;
  } else if (f.emit == "text") {
    cfg.emit = EmitFormat::Text;
  } else {
    throw ConfigError("--emit expects csv|text");
  }
  cfg.threads = f.threads;
  return cfg;
}

int cmd_mine(const MineFlags& f) {
  const PipelineConfig cfg = to_config(f);
  const MineResult result = run_mine(cfg);
  std::cout << result.summary_text;
  if (cfg.out_dir.empty()) {
    std::cout << "\n" << result.recommendation_report;
  } else {
    std::cout << "reports written to " << cfg.out_dir << "\n";
  }
  return kExitOk;
}

int cmd_thresholds(const MineFlags& f) {
  PipelineConfig cfg = to_config(f);
  cfg.out_dir.clear();
  const MineResult result = run_mine(cfg);
  std::cout << thresholds_to_csv(result.thresholds);
  return kExitOk;
}

struct ReportFlags {
  MineFlags mine;
  std::string page;
};

int cmd_report(const ReportFlags& f) {
  const PipelineConfig cfg = to_config(f.mine);
  IngestStats stats;
  std::vector<Hit> hits;
  for (const auto& path : cfg.log_paths) {
    if (!std::filesystem::exists(path)) {
      throw ConfigError("log file does not exist: " + path);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    auto part = read_log(in, cfg.format, cfg.filter, stats,
                         cfg.key_user_agent);
    hits.insert(hits.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  const auto sessions = annotate_all(sessionize(hits, cfg.timeout_seconds),
                                     cfg.last_dwell);
  std::cout << path_hits_to_csv(emit_path_hit_counts(sessions, f.page));
  return kExitOk;
}

struct SimulateFlags {
  std::string graph;
  std::size_t sessions = 100;
  std::uint64_t seed = 1;
  double epsilon = 0.3;
  double backtrack = 0.9;
  int give_up = 30;
  std::string dwell_transit = "10,2";
  std::string dwell_dest = "120,30";
  std::int64_t start = 1120996800;  // 2005-07-10T12:00:00Z
  std::int64_t spacing = 60;
  int dests_min = 2;
  int dests_max = 4;
  std::vector<std::string> fixed_dests;
  std::string out_dir;
};

int cmd_simulate(const SimulateFlags& f) {
  if (!std::filesystem::exists(f.graph)) {
    throw ConfigError("graph file does not exist: " + f.graph);
  }
  std::ifstream gf(f.graph);
  if (!gf) throw IoError("cannot open " + f.graph);
  SiteGraph graph;
  try {
    graph = load_edge_list(gf);
  } catch (const BadEdgeLine& e) {
    throw ConfigError(f.graph + ": " + e.what());
  }
  if (!graph.root()) {
    throw ConfigError("graph declares no root (`# root <page>` line)");
  }

  UserPolicy policy;
  policy.wrong_choice_prob = f.epsilon;
  policy.backtrack_prob = f.backtrack;
  policy.give_up_steps = f.give_up;
  policy.seed = f.seed;
  const auto transit = parse_csv_doubles(f.dwell_transit, "--dwell-transit");
  const auto dest = parse_csv_doubles(f.dwell_dest, "--dwell-dest");
  if (transit.size() != 2 || dest.size() != 2) {
    throw ConfigError("dwell distributions expect `mean,jitter`");
  }
  policy.dwell_at_transit = {transit[0], transit[1]};
  policy.dwell_at_destination = {dest[0], dest[1]};
  try {
    policy.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  CorpusOptions options;
  options.min_destinations = f.dests_min;
  options.max_destinations = f.dests_max;
  options.session_spacing_seconds = f.spacing;
  options.fixed_destinations = f.fixed_dests;

  const Corpus corpus =
      generate_corpus(graph, f.sessions, policy, f.start, options);
  if (f.out_dir.empty()) {
    std::cout << corpus.log_text;
  } else {
    std::error_code ec;
    std::filesystem::create_directories(f.out_dir, ec);
    if (ec) throw IoError("cannot create " + f.out_dir);
    const auto dir = std::filesystem::path(f.out_dir);
    std::ofstream log(dir / "access.log", std::ios::binary);
    log << corpus.log_text;
    std::ofstream truth(dir / "ground_truth.tsv", std::ios::binary);
    truth << corpus.truth_text;
    if (!log || !truth) throw IoError("write failure under " + f.out_dir);
    std::cout << "wrote " << f.sessions << " sessions to " << f.out_dir
              << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"navmine: mines web access logs for pages users expected to "
               "find elsewhere, and simulates browsing to validate the "
               "miner"};
  app.require_subcommand(1);
  app.set_config("--config");

  MineFlags mine_flags;
  auto* mine = app.add_subcommand("mine", "run the full mining pipeline");
  add_mine_flags(mine, mine_flags, /*with_optimizer=*/true);

  MineFlags threshold_flags;
  auto* thresholds =
      app.add_subcommand("thresholds", "print per-page threshold times");
  add_mine_flags(thresholds, threshold_flags, /*with_optimizer=*/false);

  ReportFlags report_flags;
  auto* report = app.add_subcommand(
      "report", "monthly per-predecessor hit counts for one page");
  add_mine_flags(report, report_flags.mine, /*with_optimizer=*/false);
  report->add_option("--page", report_flags.page, "destination page")
      ->required();

  SimulateFlags sim_flags;
  auto* simulate =
      app.add_subcommand("simulate", "generate a synthetic browsing corpus");
  simulate->add_option("--graph", sim_flags.graph, "site edge-list file")
      ->required();
  simulate->add_option("--sessions", sim_flags.sessions, "session count");
  simulate->add_option("--seed", sim_flags.seed, "master seed");
  simulate->add_option("--epsilon", sim_flags.epsilon,
                       "wrong-choice probability");
  simulate->add_option("--backtrack", sim_flags.backtrack,
                       "backtrack probability");
  simulate->add_option("--give-up", sim_flags.give_up,
                       "moves before abandoning a destination");
  simulate->add_option("--dwell-transit", sim_flags.dwell_transit,
                       "transit dwell `mean,jitter` seconds");
  simulate->add_option("--dwell-dest", sim_flags.dwell_dest,
                       "destination dwell `mean,jitter` seconds");
  simulate->add_option("--start", sim_flags.start, "first session epoch");
  simulate->add_option("--spacing", sim_flags.spacing,
                       "seconds between session starts");
  simulate->add_option("--dests-min", sim_flags.dests_min,
                       "min destinations per session");
  simulate->add_option("--dests-max", sim_flags.dests_max,
                       "max destinations per session");
  simulate->add_option("--dest", sim_flags.fixed_dests,
                       "fixed destination (repeatable)");
  simulate->add_option("--out", sim_flags.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*mine) return cmd_mine(mine_flags);
    if (*thresholds) return cmd_thresholds(threshold_flags);
    if (*report) return cmd_report(report_flags);
    if (*simulate) return cmd_simulate(sim_flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnknownPage& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
