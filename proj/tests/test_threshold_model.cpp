#include "navmine/threshold_model.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"

using namespace navmine;

namespace {

DwellSample sample(Seconds t, Seconds prior, bool estimated = false) {
  return DwellSample{t, prior, estimated};
}

// Oracle: the weighted average written as an explicit convex combination,
// long double accumulation, independent of the production code path.
long double oracle_threshold(const std::vector<DwellSample>& samples,
                             double d) {
  long double total = 0;
  for (const auto& s : samples) total += s.prior_site_time;
  if (total == 0) {
    long double mean = 0;
    for (const auto& s : samples) mean += s.dwell;
    return static_cast<long double>(d) * mean / samples.size();
  }
  long double acc = 0;
  for (const auto& s : samples) {
    acc += static_cast<long double>(s.dwell) *
           (static_cast<long double>(s.prior_site_time) / total);
  }
  return static_cast<long double>(d) * acc;
}

std::vector<DwellSample> random_samples(std::uint64_t& state) {
  auto next = [&state] {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  std::vector<DwellSample> out;
  const int n = 1 + static_cast<int>(next() % 8);
  const bool zero_priors = next() % 5 == 0;
  for (int i = 0; i < n; ++i) {
    const Seconds t = static_cast<Seconds>(next() % 10000) / 10.0;
    const Seconds prior =
        zero_priors ? 0.0 : static_cast<Seconds>(next() % 20000) / 10.0;
    out.push_back(sample(t, prior));
  }
  return out;
}

}  // namespace

TEST_CASE("compute_threshold evaluates the weighted form") {
  CHECK(compute_threshold(std::vector<DwellSample>{sample(10, 100)}, 0.5) ==
        doctest::Approx(5.0).epsilon(1e-12));
  // 0.5 * (10*100 + 20*300) / (100 + 300) = 0.5 * 7000/400 = 8.75
  CHECK(compute_threshold(
            std::vector<DwellSample>{sample(10, 100), sample(20, 300)}, 0.5) ==
        doctest::Approx(8.75).epsilon(1e-12));
}

TEST_CASE("compute_threshold falls back to the mean when priors are zero") {
  CHECK(compute_threshold(
            std::vector<DwellSample>{sample(10, 0), sample(20, 0)}, 0.5) ==
        doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("compute_threshold rejects empty samples and bad damping") {
  CHECK_THROWS_AS(compute_threshold(std::vector<DwellSample>{}, 0.5),
                  EmptySamples);
  CHECK_THROWS_AS(
      compute_threshold(std::vector<DwellSample>{sample(1, 1)}, 0.1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      compute_threshold(std::vector<DwellSample>{sample(1, 1)}, 0.9),
      std::invalid_argument);
  // range endpoints are allowed
  CHECK_NOTHROW(compute_threshold(std::vector<DwellSample>{sample(1, 1)}, 0.15));
  CHECK_NOTHROW(compute_threshold(std::vector<DwellSample>{sample(1, 1)}, 0.85));
}

TEST_CASE("threshold properties: homogeneity, bound, scale covariance") {
  std::uint64_t state = 2024;
  for (int trial = 0; trial < 300; ++trial) {
    const auto samples = random_samples(state);

    // homogeneity in d (both values in range)
    const double d = 0.15 + (trial % 100) * 0.00275;  // up to 0.4225
    const double one = compute_threshold(samples, d);
    const double two = compute_threshold(samples, 2 * d);
    CHECK(two == doctest::Approx(2 * one).epsilon(1e-9));

    // bound: T <= d * max(t)
    Seconds max_t = 0;
    for (const auto& s : samples) max_t = std::max(max_t, s.dwell);
    CHECK(one <= d * max_t + 1e-9);

    // scale covariance in t
    std::vector<DwellSample> scaled = samples;
    for (auto& s : scaled) s.dwell *= 3.5;
    CHECK(compute_threshold(scaled, d) ==
          doctest::Approx(3.5 * one).epsilon(1e-9));

    // oracle agreement
    const long double expected = oracle_threshold(samples, d);
    if (expected != 0) {
      CHECK(std::abs(one - static_cast<double>(expected)) <=
            1e-9 * std::abs(static_cast<double>(expected)));
    } else {
      CHECK(one == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("collect_samples reads annotated sessions") {
  CHECK(collect_samples({}).empty());

  Session s1;
  s1.client_key = "c";
  s1.id = "c#0";
  s1.visits = {{"A", 0, 40, 0, false}, {"B", 40, 60, 40, true}};
  Session s2;
  s2.client_key = "d";
  s2.id = "d#0";
  s2.visits = {{"B", 0, 25, 0, false}, {"B2", 25, 30, 25, true}};

  const auto samples = collect_samples({s1, s2});
  REQUIRE(samples.count("A") == 1);
  REQUIRE(samples.count("B") == 1);
  CHECK(samples.at("A").size() == 1);
  CHECK(samples.at("A")[0].dwell == doctest::Approx(40));
  CHECK(samples.at("A")[0].prior_site_time == doctest::Approx(0));
  CHECK(samples.at("B").size() == 2);
  CHECK(samples.at("B")[0].estimated);
  CHECK_FALSE(samples.at("B")[1].estimated);
}

TEST_CASE("a page visited twice in one session contributes two samples") {
  Session s;
  s.visits = {{"A", 0, 10, 0, false},
              {"B", 10, 20, 10, false},
              {"A", 30, 15, 30, true}};
  const auto samples = collect_samples({s});
  CHECK(samples.at("A").size() == 2);
}

TEST_CASE("compute_thresholds applies per-page damping and filters") {
  std::map<std::string, std::vector<DwellSample>> samples;
  samples["A"] = {sample(10, 100)};
  samples["B"] = {sample(10, 100), sample(99, 50, true)};
  samples["C"] = {sample(42, 10, true)};

  ThresholdConfig cfg;
  cfg.damping = 0.5;
  cfg.per_page_damping["A"] = 0.25;

  const auto with_estimates = compute_thresholds(samples, cfg);
  CHECK(with_estimates.at("A").threshold == doctest::Approx(2.5));
  CHECK(with_estimates.at("A").damping == doctest::Approx(0.25));
  CHECK(with_estimates.at("B").sample_count == 2);
  CHECK(with_estimates.at("C").sample_count == 1);

  cfg.include_estimated = false;
  const auto without = compute_thresholds(samples, cfg);
  CHECK(without.at("B").sample_count == 1);
  CHECK(without.at("B").threshold == doctest::Approx(5.0));
  CHECK(without.count("C") == 0);  // all samples estimated -> no threshold

  const auto times = threshold_times(without);
  CHECK(times.count("C") == 0);  // downstream sees +infinity
}

TEST_CASE("load_damping_file parses and validates") {
  std::istringstream good("# comment\n/a\t0.3\n/b 0.85\n");
  const auto map = load_damping_file(good);
  CHECK(map.at("/a") == doctest::Approx(0.3));
  CHECK(map.at("/b") == doctest::Approx(0.85));

  std::istringstream out_of_range("/a 0.05\n");
  CHECK_THROWS_AS(load_damping_file(out_of_range), std::runtime_error);
  std::istringstream garbage("/a x\n");
  CHECK_THROWS_AS(load_damping_file(garbage), std::runtime_error);
}
