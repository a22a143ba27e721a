#ifndef NAVMINE_OPTIMIZER_HPP
#define NAVMINE_OPTIMIZER_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "navmine/pattern_miner.hpp"

namespace navmine {

// Positional weights: the chance the n-th attempted IRL was where the user
// expected the destination. Positions past the vector either repeat the
// last weight or contribute nothing, per the overflow policy.
struct OmegaWeights {
  enum class Overflow { RepeatLast, Zero };

  std::vector<double> weights = {1.0, 0.75, 0.5, 0.25};
  Overflow overflow = Overflow::RepeatLast;

  double at(std::size_t position) const;  // 1-based IRL position

  // Enforces: non-empty, non-increasing, all in [0, 1].
  void validate() const;
};

struct BetaTable {
  std::string destination;
  std::map<std::string, double> beta;  // page -> accumulated weight
};

struct RecommendationSet {
  std::string destination;
  double s_p = 0;
  std::set<std::string> recommended;   // pages with beta >= s_p
  std::string top_candidate;           // max beta, ties to smallest page id
  std::set<std::string> actual_locations;
};

// Accumulates omega weight per IRL page over records that all share one
// destination.
BetaTable compute_beta(const std::vector<PatternRecord>& records,
                       const OmegaWeights& omega);

// s_p is the mean beta over the table's distinct IRL pages; every page at
// or above the mean is recommended.
RecommendationSet summarize(const BetaTable& table);

struct DestinationAnalysis {
  BetaTable beta;
  RecommendationSet recommendation;
  std::size_t record_count = 0;
};

// Groups records by destination and scores each group.
std::map<std::string, DestinationAnalysis> analyze_destinations(
    const std::vector<PatternRecord>& records, const OmegaWeights& omega);

// Groups records by destination and produces one recommendation per group,
// with the observed actual locations attached.
std::map<std::string, RecommendationSet> recommend_all(
    const std::vector<PatternRecord>& records, const OmegaWeights& omega);

// Cuts each record at the first recommended IRL: that page and everything
// after it go; records without a recommended page stay whole.
std::vector<PatternRecord> truncate(std::vector<PatternRecord> records,
                                    const std::set<std::string>& recommended);

// Per-destination truncation using each record's own recommendation set.
std::vector<PatternRecord> truncate_all(
    std::vector<PatternRecord> records,
    const std::map<std::string, RecommendationSet>& recommendations);

}  // namespace navmine

#endif  // NAVMINE_OPTIMIZER_HPP
