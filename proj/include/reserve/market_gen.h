// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Synthetic homogeneous markets and the numeric side of the large-market
// competitiveness results: rank thresholds, the normal-potential condition,
// a logistic normal-quantile approximation, balls-in-bins simulation and a
// Monte Carlo estimate of how often markets are highly competitive.
//
// Logarithms are natural throughout.

#ifndef RESERVE_MARKET_GEN_H_
#define RESERVE_MARKET_GEN_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "reserve/model.h"

namespace reserve {

// splitmix64 finaliser applied to (seed, label, index). Used to fan one
// top-level seed out into independent per-task streams.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index = 0);

struct NormalParams {
  double mean_advantaged = 0.0;
  double mean_disadvantaged = 0.0;
  double sd_advantaged = 1.0;
  double sd_disadvantaged = 1.0;
};

// How the two groups are merged into one priority ranking.
struct InterleavePolicy {
  enum class Kind : std::uint8_t {
    kExplicit,          // `merged[r]` is the group at rank r
    kBiasedRandom,      // advantaged next with odds bias * a : d
    kNormalPotentials,  // rank by sampled scores
  };
  Kind kind = Kind::kNormalPotentials;
  std::vector<Group> merged;
  double bias = 1.0;
  NormalParams normal;

  static InterleavePolicy explicit_order(std::vector<Group> merged);
  static InterleavePolicy biased(double bias);
  static InterleavePolicy potentials(const NormalParams& params);
};

struct HomogeneousMarketConfig {
  std::uint32_t schools = 1;
  std::uint32_t advantaged = 0;
  std::uint32_t disadvantaged = 0;
  std::uint32_t quota = 1;
  std::uint32_t reserved = 0;
  InterleavePolicy interleave;
  std::uint64_t seed = 0;
  // Truncate every list to this many schools; full permutations otherwise.
  std::optional<std::uint32_t> list_length;
};

struct NormalPotentialConfig {
  NormalParams normal;
  std::uint32_t schools = 1;
  std::uint32_t advantaged = 0;
  std::uint32_t disadvantaged = 0;
  std::uint32_t quota = 1;
  std::uint32_t reserved = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint32_t> list_length;
};

// Students 0..advantaged-1 are advantaged, the rest disadvantaged.
struct GeneratedMarket {
  Instance instance;
  ReservationQuotas quotas;
  // Sampled potentials when the ranking came from scores; empty otherwise.
  std::vector<double> scores;
};

// Throws InputError on reserved > quota, zero schools, a bad explicit order,
// non-positive sd or non-positive bias.
GeneratedMarket gen_homogeneous(const HomogeneousMarketConfig& config);
GeneratedMarket gen_normal_potentials(const NormalPotentialConfig& config);

struct Thm43Check {
  // ceil(n ln n + (q - qR) n ln ln n), the threshold as stated.
  std::uint64_t r_advantaged = 0;
  // ceil(n ln n + (q - qR - 1) n ln ln n), the cover-time form.
  std::uint64_t r_advantaged_cover = 0;
  // ceil((1 - eps) qR n).
  std::uint64_t r_disadvantaged = 0;
  // Log-free proxies n + n(q - qR) and qR n.
  std::uint64_t proxy_advantaged = 0;
  std::uint64_t proxy_disadvantaged = 0;
  bool reserve_exceeds_n_log_n = false;  // qR > n ln n
  bool structural = false;               // q - 1 > qR > n ln n
  bool holds = false;                    // rank condition with r_advantaged
  bool holds_cover = false;              // same with r_advantaged_cover
};

// Ranks are 1-based within each group. The condition holds when the
// r_M-th advantaged student exists and outranks the r_m-th disadvantaged
// student (or the latter does not exist). ln ln n is clamped at 0 and ranks
// at 1 for tiny n. Throws std::invalid_argument unless 0 < eps < 1, and
// InputError without a universal priority order.
Thm43Check check_thm43_hypothesis(const Instance& inst, std::uint32_t quota,
                                  std::uint32_t reserved, double eps);

// Same rank thresholds from market sizes alone.
Thm43Check thm43_ranks(std::uint32_t schools, std::uint32_t quota,
                       std::uint32_t reserved, double eps);

struct Thm44Check {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// lhs = mu_M - mu_m,
// rhs = 0.008 (sd_M + sd_m)
//       + (sd_M ln(1/p_M - 1) - sd_m ln(1/p_m - 1)) / 1.702.
// Throws std::invalid_argument unless both p lie in (0, 1).
Thm44Check check_thm44_condition(const NormalParams& params, double p_advantaged,
                                 double p_disadvantaged);

struct Thm44Probabilities {
  double p_advantaged = 0.0;     // (n ln n + (q - qR - 1) n ln ln n) / |S^M|
  double p_disadvantaged = 0.0;  // (1 + eps) qR n / |S^m|
};
Thm44Probabilities thm44_probabilities(std::uint32_t schools,
                                       std::uint32_t quota,
                                       std::uint32_t reserved,
                                       std::uint32_t advantaged,
                                       std::uint32_t disadvantaged, double eps);

// mu + sd * ln(1/alpha - 1) / -1.702. Throws std::invalid_argument unless
// 0 < alpha < 1.
double normal_quantile_approx(double alpha, double mean = 0.0,
                              double sd = 1.0);

struct BallsInBinsStats {
  // Per trial: 1-based index of the first ball landing in a bin that already
  // holds `threshold` balls.
  std::vector<std::uint64_t> first_overflow;
  // Per trial: balls thrown until every bin holds at least `threshold`.
  std::vector<std::uint64_t> cover_time;
};

BallsInBinsStats balls_in_bins_stats(std::uint32_t bins,
                                     std::uint32_t threshold,
                                     std::uint32_t trials, std::uint64_t seed);

// n ln n + (t - 1) n ln ln n.
double erdos_renyi_cover_prediction(std::uint32_t bins, std::uint32_t threshold);
// Limit of P(cover <= n ln n + (t - 1) n ln ln n + x n): exp(-e^-x / (t-1)!).
double erdos_renyi_limit_cdf(double x, std::uint32_t threshold);

// Nearest-rank empirical quantile, p in [0, 1]. Throws on empty input.
double empirical_quantile(std::vector<std::uint64_t> values, double p);

struct ProportionEstimate {
  std::uint32_t successes = 0;
  std::uint32_t trials = 0;
  double rate = 0.0;
  double lower = 0.0;  // Wilson score interval, 95%
  double upper = 0.0;
};

ProportionEstimate wilson_interval(std::uint32_t successes,
                                   std::uint32_t trials);

// Draws `trials` markets with per-trial seeds derived from `seed` and counts
// the highly competitive ones. Throws std::invalid_argument for trials == 0.
ProportionEstimate monte_carlo_hc_rate(const NormalPotentialConfig& config,
                                       std::uint32_t trials,
                                       std::uint64_t seed);
ProportionEstimate monte_carlo_hc_rate(const HomogeneousMarketConfig& config,
                                       std::uint32_t trials,
                                       std::uint64_t seed);

}  // namespace reserve

#endif  // RESERVE_MARKET_GEN_H_
