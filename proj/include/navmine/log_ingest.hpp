#ifndef NAVMINE_LOG_INGEST_HPP
#define NAVMINE_LOG_INGEST_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "navmine/clock.hpp"
#include "navmine/sessionizer.hpp"

namespace navmine {

// Supported access-log line grammars:
//   common:   host ident authuser [dd/Mon/yyyy:HH:MM:SS zzzzz]
//             "METHOD path PROTO" status bytes
//   combined: common + " "referer" "user-agent""
// A bare `-` marks an absent field.
enum class LogFormat { Common, Combined };

struct RawHit {
  std::string client_addr;
  std::optional<std::string> ident;
  std::optional<std::string> authuser;
  Instant timestamp = 0;
  int zone_offset_minutes = 0;
  std::string method;
  std::string path;
  std::string protocol;
  int status = 0;
  std::optional<std::uint64_t> bytes;
  std::optional<std::string> referer;
  std::optional<std::string> user_agent;
};

class MalformedLine : public std::runtime_error {
 public:
  explicit MalformedLine(const std::string& reason)
      : std::runtime_error(reason) {}
};

struct FilterConfig {
  std::set<std::string> ignored_extensions = {"jpg", "jpeg", "gif", "png",
                                              "bmp", "ico", "css", "js",
                                              "swf"};
  std::set<int> accepted_statuses = default_statuses();
  std::set<std::string> accepted_methods = {"GET"};
  bool strip_query = true;

  // All 2xx plus 304: a cached re-view is still a page view.
  static std::set<int> default_statuses();
};

// Parses one log line (no trailing newline). Throws MalformedLine for any
// line that does not match the declared grammar; never yields a partial hit.
RawHit parse_line(std::string_view line, LogFormat format);

// Query/fragment stripping used before filtering and as the page identifier.
std::string normalize_path(std::string_view path, bool strip_query);

// Lowercased extension of the final path segment, "" when there is none.
std::string path_extension(std::string_view path);

bool passes_filter(const RawHit& hit, const FilterConfig& cfg);

// Keeps hits whose method/status/extension pass `cfg`, in input order,
// lowered to session-ready Hits with normalized page identifiers.
std::vector<Hit> filter_hits(const std::vector<RawHit>& hits,
                             const FilterConfig& cfg,
                             bool key_user_agent = false);

struct IngestStats {
  std::uint64_t lines = 0;
  std::uint64_t malformed = 0;
  std::uint64_t parsed = 0;
  std::uint64_t kept = 0;
};

// Streams a whole log: parse, count-and-skip malformed lines, filter.
std::vector<Hit> read_log(std::istream& in, LogFormat format,
                          const FilterConfig& cfg, IngestStats& stats,
                          bool key_user_agent = false);

// Same, over an in-memory buffer; `threads` > 1 shards the work by line
// ranges without changing the output.
std::vector<Hit> read_log_text(std::string_view text, LogFormat format,
                               const FilterConfig& cfg, IngestStats& stats,
                               bool key_user_agent = false, int threads = 1);

}  // namespace navmine

#endif  // NAVMINE_LOG_INGEST_HPP
