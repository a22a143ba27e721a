#include "navmine/optimizer.hpp"

#include <stdexcept>

namespace navmine {

double OmegaWeights::at(std::size_t position) const {
  if (position == 0) throw std::invalid_argument("IRL positions are 1-based");
  if (position <= weights.size()) return weights[position - 1];
  return overflow == Overflow::RepeatLast ? weights.back() : 0.0;
}

void OmegaWeights::validate() const {
  if (weights.empty()) {
    throw std::invalid_argument("omega weights must be non-empty");
  }
  double prev = 1.0;
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw std::invalid_argument("omega weights must lie in [0, 1]");
    }
    if (w > prev) {
      throw std::invalid_argument("omega weights must be non-increasing");
    }
    prev = w;
  }
}

BetaTable compute_beta(const std::vector<PatternRecord>& records,
                       const OmegaWeights& omega) {
  BetaTable table;
  if (records.empty()) return table;
  table.destination = records.front().destination;
  for (const PatternRecord& r : records) {
    if (r.destination != table.destination) {
      throw std::invalid_argument(
          "compute_beta needs records of a single destination (got `" +
          r.destination + "` and `" + table.destination + "`)");
    }
    for (std::size_t i = 0; i < r.irls.size(); ++i) {
      table.beta[r.irls[i]] += omega.at(i + 1);
    }
  }
  return table;
}

RecommendationSet summarize(const BetaTable& table) {
  RecommendationSet rec;
  rec.destination = table.destination;
  if (table.beta.empty()) return rec;

  double sum = 0;
  double best = -1;
  for (const auto& [page, beta] : table.beta) {
    sum += beta;
    if (beta > best) {  // ties keep the earlier (smaller) page id
      best = beta;
      rec.top_candidate = page;
    }
  }
  rec.s_p = sum / static_cast<double>(table.beta.size());
  for (const auto& [page, beta] : table.beta) {
    if (beta >= rec.s_p) rec.recommended.insert(page);
  }
  return rec;
}

std::map<std::string, DestinationAnalysis> analyze_destinations(
    const std::vector<PatternRecord>& records, const OmegaWeights& omega) {
  std::map<std::string, std::vector<PatternRecord>> groups;
  for (const PatternRecord& r : records) {
    groups[r.destination].push_back(r);
  }
  std::map<std::string, DestinationAnalysis> out;
  for (const auto& [destination, group] : groups) {
    DestinationAnalysis a;
    a.beta = compute_beta(group, omega);
    a.recommendation = summarize(a.beta);
    a.record_count = group.size();
    for (const PatternRecord& r : group) {
      a.recommendation.actual_locations.insert(r.actual_location);
    }
    out.emplace(destination, std::move(a));
  }
  return out;
}

std::map<std::string, RecommendationSet> recommend_all(
    const std::vector<PatternRecord>& records, const OmegaWeights& omega) {
  std::map<std::string, RecommendationSet> out;
  for (auto& [destination, analysis] : analyze_destinations(records, omega)) {
    out.emplace(destination, std::move(analysis.recommendation));
  }
  return out;
}

std::vector<PatternRecord> truncate(std::vector<PatternRecord> records,
                                    const std::set<std::string>& recommended) {
  for (PatternRecord& r : records) {
    for (std::size_t i = 0; i < r.irls.size(); ++i) {
      if (recommended.count(r.irls[i])) {
        r.irls.resize(i);
        break;
      }
    }
  }
  return records;
}

std::vector<PatternRecord> truncate_all(
    std::vector<PatternRecord> records,
    const std::map<std::string, RecommendationSet>& recommendations) {
  for (PatternRecord& r : records) {
    const auto it = recommendations.find(r.destination);
    if (it == recommendations.end()) continue;
    const auto& recommended = it->second.recommended;
    for (std::size_t i = 0; i < r.irls.size(); ++i) {
      if (recommended.count(r.irls[i])) {
        r.irls.resize(i);
        break;
      }
    }
  }
  return records;
}

}  // namespace navmine
