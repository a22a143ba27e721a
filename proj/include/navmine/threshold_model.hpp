#ifndef NAVMINE_THRESHOLD_MODEL_HPP
#define NAVMINE_THRESHOLD_MODEL_HPP

#include <istream>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "navmine/sessionizer.hpp"

namespace navmine {

// One (t, T) observation for a page: dwell time and the time already spent
// on the site before arriving. A page visited twice in one session
// contributes two samples.
struct DwellSample {
  Seconds dwell = 0;
  Seconds prior_site_time = 0;
  bool estimated = false;
};

struct PageThreshold {
  std::string page;
  Seconds threshold = 0;
  std::size_t sample_count = 0;
  double damping = 0.5;
};

class EmptySamples : public std::runtime_error {
 public:
  EmptySamples() : std::runtime_error("no dwell samples") {}
};

constexpr double kMinDamping = 0.15;
constexpr double kMaxDamping = 0.85;

std::map<std::string, std::vector<DwellSample>> collect_samples(
    const std::vector<Session>& sessions);

// Threshold time separating destination from intermediate-reference visits:
//   d * (t1*T1 + ... + tn*Tn) / (T1 + ... + Tn)
// When every T is zero the weighted form is undefined and the unweighted
// mean d * mean(t) is used instead.
Seconds compute_threshold(std::span<const DwellSample> samples, double damping);

struct ThresholdConfig {
  double damping = 0.5;
  std::map<std::string, double> per_page_damping;
  bool include_estimated = true;
};

// Per-page thresholds; pages whose (possibly filtered) sample list is empty
// get no entry, which downstream code treats as an infinite threshold.
std::map<std::string, PageThreshold> compute_thresholds(
    const std::map<std::string, std::vector<DwellSample>>& samples,
    const ThresholdConfig& cfg);

// Flattens to the page -> threshold map the marking step consumes.
std::map<std::string, Seconds> threshold_times(
    const std::map<std::string, PageThreshold>& thresholds);

// Per-page damping overrides: lines of `page<TAB>d`, `#` comments allowed.
// Throws std::runtime_error with the offending line number.
std::map<std::string, double> load_damping_file(std::istream& in);

}  // namespace navmine

#endif  // NAVMINE_THRESHOLD_MODEL_HPP
