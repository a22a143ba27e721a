#include "navmine/threshold_model.hpp"

#include <sstream>

namespace navmine {

namespace {

void check_damping(double d) {
  if (!(d >= kMinDamping && d <= kMaxDamping)) {
    throw std::invalid_argument("damping factor " + std::to_string(d) +
                                " outside [0.15, 0.85]");
  }
}

}  // namespace

std::map<std::string, std::vector<DwellSample>> collect_samples(
    const std::vector<Session>& sessions) {
  std::map<std::string, std::vector<DwellSample>> out;
  for (const Session& s : sessions) {
    for (const PageVisit& v : s.visits) {
      out[v.page].push_back(
          DwellSample{v.dwell, v.prior_site_time, v.dwell_estimated});
    }
  }
  return out;
}

Seconds compute_threshold(std::span<const DwellSample> samples,
                          double damping) {
  if (samples.empty()) throw EmptySamples();
  check_damping(damping);

  Seconds weighted = 0;
  Seconds total_prior = 0;
  for (const DwellSample& s : samples) {
    weighted += s.dwell * s.prior_site_time;
    total_prior += s.prior_site_time;
  }
  if (total_prior > 0) {
    return damping * weighted / total_prior;
  }
  // All samples are session-opening visits; fall back to the plain mean.
  Seconds sum = 0;
  for (const DwellSample& s : samples) sum += s.dwell;
  return damping * sum / static_cast<Seconds>(samples.size());
}

std::map<std::string, PageThreshold> compute_thresholds(
    const std::map<std::string, std::vector<DwellSample>>& samples,
    const ThresholdConfig& cfg) {
  check_damping(cfg.damping);
  for (const auto& [page, d] : cfg.per_page_damping) check_damping(d);

  std::map<std::string, PageThreshold> out;
  std::vector<DwellSample> kept;
  for (const auto& [page, page_samples] : samples) {
    const std::vector<DwellSample>* use = &page_samples;
    if (!cfg.include_estimated) {
      kept.clear();
      for (const DwellSample& s : page_samples) {
        if (!s.estimated) kept.push_back(s);
      }
      use = &kept;
    }
    if (use->empty()) continue;

    const auto it = cfg.per_page_damping.find(page);
    const double d =
        it == cfg.per_page_damping.end() ? cfg.damping : it->second;
    PageThreshold t;
    t.page = page;
    t.damping = d;
    t.sample_count = use->size();
    t.threshold = compute_threshold(*use, d);
    out.emplace(page, std::move(t));
  }
  return out;
}

std::map<std::string, Seconds> threshold_times(
    const std::map<std::string, PageThreshold>& thresholds) {
  std::map<std::string, Seconds> out;
  for (const auto& [page, t] : thresholds) out.emplace(page, t.threshold);
  return out;
}

std::map<std::string, double> load_damping_file(std::istream& in) {
  std::map<std::string, double> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    std::string page;
    if (!(tokens >> page) || page[0] == '#') continue;
    double d = 0;
    std::string extra;
    if (!(tokens >> d) || (tokens >> extra)) {
      throw std::runtime_error("damping file line " +
                               std::to_string(line_number) +
                               ": expected `page d`");
    }
    if (!(d >= kMinDamping && d <= kMaxDamping)) {
      throw std::runtime_error("damping file line " +
                               std::to_string(line_number) +
                               ": d outside [0.15, 0.85]");
    }
    out[page] = d;
  }
  return out;
}

}  // namespace navmine
