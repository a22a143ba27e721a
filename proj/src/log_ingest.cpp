#include "navmine/log_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <thread>

namespace navmine {

namespace {

// Cursor over one line; throws MalformedLine on any grammar violation.
class LineScanner {
 public:
  explicit LineScanner(std::string_view line) : rest_(line) {}

  std::string_view take_token(const char* what) {
    const auto pos = rest_.find(' ');
    std::string_view tok =
        pos == std::string_view::npos ? rest_ : rest_.substr(0, pos);
    if (tok.empty()) {
      throw MalformedLine(std::string("missing ") + what);
    }
    rest_.remove_prefix(tok.size());
    return tok;
  }

  std::string_view take_bracketed(const char* what) {
    expect('[', what);
    const auto pos = rest_.find(']');
    if (pos == std::string_view::npos) {
      throw MalformedLine(std::string("unterminated ") + what);
    }
    std::string_view inner = rest_.substr(0, pos);
    rest_.remove_prefix(pos + 1);
    return inner;
  }

  std::string_view take_quoted(const char* what) {
    expect('"', what);
    std::size_t i = 0;
    while (i < rest_.size()) {
      if (rest_[i] == '\\' && i + 1 < rest_.size()) {
        i += 2;
        continue;
      }
      if (rest_[i] == '"') break;
      ++i;
    }
    if (i >= rest_.size()) {
      throw MalformedLine(std::string("unterminated ") + what);
    }
    std::string_view inner = rest_.substr(0, i);
    rest_.remove_prefix(i + 1);
    return inner;
  }

  void skip_space(const char* what) {
    if (rest_.empty() || rest_[0] != ' ') {
      throw MalformedLine(std::string("expected space before ") + what);
    }
    rest_.remove_prefix(1);
  }

  void expect_end() {
    if (!rest_.empty()) {
      throw MalformedLine("trailing content after last field");
    }
  }

 private:
  void expect(char c, const char* what) {
    if (rest_.empty() || rest_[0] != c) {
      throw MalformedLine(std::string("malformed ") + what);
    }
    rest_.remove_prefix(1);
  }

  std::string_view rest_;
};

std::optional<std::string> dash_to_absent(std::string_view tok) {
  if (tok == "-") return std::nullopt;
  return std::string(tok);
}

bool parse_uint(std::string_view tok, std::uint64_t& out) {
  if (tok.empty()) return false;
  std::uint64_t v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::set<int> FilterConfig::default_statuses() {
  std::set<int> s;
  for (int c = 200; c < 300; ++c) s.insert(c);
  s.insert(304);
  return s;
}

RawHit parse_line(std::string_view line, LogFormat format) {
  if (line.empty()) {
    throw MalformedLine("empty line");
  }
  LineScanner sc(line);
  RawHit hit;

  hit.client_addr = std::string(sc.take_token("host"));
  sc.skip_space("ident");
  hit.ident = dash_to_absent(sc.take_token("ident"));
  sc.skip_space("authuser");
  hit.authuser = dash_to_absent(sc.take_token("authuser"));

  sc.skip_space("timestamp");
  const std::string_view clock = sc.take_bracketed("timestamp");
  const auto instant = parse_clf_time(clock);
  if (!instant) {
    throw MalformedLine("bad timestamp: " + std::string(clock));
  }
  hit.timestamp = *instant;
  if (clock.size() == 26) {
    const int zh = (clock[22] - '0') * 10 + (clock[23] - '0');
    const int zm = (clock[24] - '0') * 10 + (clock[25] - '0');
    hit.zone_offset_minutes = (clock[21] == '-' ? -1 : 1) * (zh * 60 + zm);
  }

  sc.skip_space("request");
  const std::string_view request = sc.take_quoted("request");
  {
    LineScanner rq(request);
    hit.method = std::string(rq.take_token("method"));
    rq.skip_space("path");
    hit.path = std::string(rq.take_token("path"));
    rq.skip_space("protocol");
    hit.protocol = std::string(rq.take_token("protocol"));
    rq.expect_end();
  }

  sc.skip_space("status");
  const std::string_view status_tok = sc.take_token("status");
  std::uint64_t status = 0;
  if (!parse_uint(status_tok, status) || status < 100 || status > 599) {
    throw MalformedLine("bad status: " + std::string(status_tok));
  }
  hit.status = static_cast<int>(status);

  sc.skip_space("bytes");
  const std::string_view bytes_tok = sc.take_token("bytes");
  if (bytes_tok != "-") {
    std::uint64_t bytes = 0;
    if (!parse_uint(bytes_tok, bytes)) {
      throw MalformedLine("bad bytes: " + std::string(bytes_tok));
    }
    hit.bytes = bytes;
  }

  if (format == LogFormat::Combined) {
    sc.skip_space("referer");
    const std::string_view ref = sc.take_quoted("referer");
    if (ref != "-") hit.referer = std::string(ref);
    sc.skip_space("user agent");
    const std::string_view agent = sc.take_quoted("user agent");
    if (agent != "-") hit.user_agent = std::string(agent);
  }
  sc.expect_end();
  return hit;
}

std::string normalize_path(std::string_view path, bool strip_query) {
  const auto frag = path.find('#');
  if (frag != std::string_view::npos) path = path.substr(0, frag);
  if (strip_query) {
    const auto q = path.find('?');
    if (q != std::string_view::npos) path = path.substr(0, q);
  }
  return std::string(path);
}

std::string path_extension(std::string_view path) {
  const auto frag = path.find('#');
  if (frag != std::string_view::npos) path = path.substr(0, frag);
  const auto q = path.find('?');
  if (q != std::string_view::npos) path = path.substr(0, q);

  const auto slash = path.rfind('/');
  const std::string_view last =
      slash == std::string_view::npos ? path : path.substr(slash + 1);
  const auto dot = last.rfind('.');
  if (dot == std::string_view::npos || dot + 1 == last.size()) return "";

  std::string ext(last.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

bool passes_filter(const RawHit& hit, const FilterConfig& cfg) {
  if (cfg.accepted_methods.find(hit.method) == cfg.accepted_methods.end()) {
    return false;
  }
  if (cfg.accepted_statuses.find(hit.status) == cfg.accepted_statuses.end()) {
    return false;
  }
  const std::string ext = path_extension(hit.path);
  if (!ext.empty() &&
      cfg.ignored_extensions.find(ext) != cfg.ignored_extensions.end()) {
    return false;
  }
  return true;
}

namespace {

Hit lower_hit(const RawHit& raw, const FilterConfig& cfg,
              bool key_user_agent) {
  Hit h;
  h.client_key = raw.client_addr;
  if (key_user_agent && raw.user_agent) {
    h.client_key += '|';
    h.client_key += *raw.user_agent;
  }
  h.timestamp = raw.timestamp;
  h.page = normalize_path(raw.path, cfg.strip_query);
  return h;
}

}  // namespace

std::vector<Hit> filter_hits(const std::vector<RawHit>& hits,
                             const FilterConfig& cfg, bool key_user_agent) {
  std::vector<Hit> out;
  out.reserve(hits.size());
  for (const RawHit& raw : hits) {
    if (passes_filter(raw, cfg)) {
      out.push_back(lower_hit(raw, cfg, key_user_agent));
    }
  }
  return out;
}

std::vector<Hit> read_log(std::istream& in, LogFormat format,
                          const FilterConfig& cfg, IngestStats& stats,
                          bool key_user_agent) {
  std::vector<Hit> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++stats.lines;
    try {
      const RawHit raw = parse_line(line, format);
      ++stats.parsed;
      if (passes_filter(raw, cfg)) {
        out.push_back(lower_hit(raw, cfg, key_user_agent));
        ++stats.kept;
      }
    } catch (const MalformedLine&) {
      ++stats.malformed;
    }
  }
  return out;
}

namespace {

struct ShardResult {
  std::vector<Hit> hits;
  IngestStats stats;
};

// Scans lines starting in [begin, end]; `end` is either the newline that
// closes the shard's last line or the effective end of the text.
void scan_range(std::string_view text, std::size_t begin, std::size_t end,
                LogFormat format, const FilterConfig& cfg,
                bool key_user_agent, ShardResult& result) {
  std::size_t pos = begin;
  while (pos <= end) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos || eol > end) eol = end;
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++result.stats.lines;
    try {
      const RawHit raw = parse_line(line, format);
      ++result.stats.parsed;
      if (passes_filter(raw, cfg)) {
        result.hits.push_back(lower_hit(raw, cfg, key_user_agent));
        ++result.stats.kept;
      }
    } catch (const MalformedLine&) {
      ++result.stats.malformed;
    }
  }
}

}  // namespace

std::vector<Hit> read_log_text(std::string_view text, LogFormat format,
                               const FilterConfig& cfg, IngestStats& stats,
                               bool key_user_agent, int threads) {
  if (text.empty()) return {};
  // A trailing newline terminates the last line; it does not open a new one.
  const std::size_t effective_end =
      text.back() == '\n' ? text.size() - 1 : text.size();

  if (threads < 2) {
    ShardResult r;
    scan_range(text, 0, effective_end, format, cfg, key_user_agent, r);
    stats.lines += r.stats.lines;
    stats.malformed += r.stats.malformed;
    stats.parsed += r.stats.parsed;
    stats.kept += r.stats.kept;
    return std::move(r.hits);
  }

  // Shard on line boundaries; concatenating shard outputs in order keeps the
  // result identical to a single-threaded scan.
  std::vector<std::size_t> starts{0};
  const std::size_t chunk = text.size() / static_cast<std::size_t>(threads);
  for (int i = 1; i < threads; ++i) {
    std::size_t at = chunk * static_cast<std::size_t>(i);
    if (at <= starts.back()) continue;
    const auto nl = text.find('\n', at);
    if (nl == std::string_view::npos) break;
    if (nl + 1 > starts.back() && nl + 1 < effective_end) {
      starts.push_back(nl + 1);
    }
  }
  starts.push_back(effective_end + 1);

  std::vector<ShardResult> results(starts.size() - 1);
  std::vector<std::thread> workers;
  workers.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const std::size_t lo = starts[i];
    const std::size_t hi = starts[i + 1] - 1;
    workers.emplace_back([&, lo, hi, i] {
      scan_range(text, lo, hi, format, cfg, key_user_agent, results[i]);
    });
  }
  for (auto& w : workers) w.join();

  std::vector<Hit> out;
  std::size_t total = 0;
  for (const auto& r : results) total += r.hits.size();
  out.reserve(total);
  for (auto& r : results) {
    stats.lines += r.stats.lines;
    stats.malformed += r.stats.malformed;
    stats.parsed += r.stats.parsed;
    stats.kept += r.stats.kept;
    out.insert(out.end(), std::make_move_iterator(r.hits.begin()),
               std::make_move_iterator(r.hits.end()));
  }
  return out;
}

}  // namespace navmine
