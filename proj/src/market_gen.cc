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

#include "reserve/market_gen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "reserve/audit.h"

namespace reserve {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// ln ln n, clamped at 0 where it is negative or undefined.
double log_log(double n) {
  const double l = std::log(n);
  return l > 1.0 ? std::log(l) : 0.0;
}

struct MarketShape {
  std::uint32_t schools, advantaged, disadvantaged, quota, reserved;
  std::optional<std::uint32_t> list_length;
  std::uint64_t seed;
};

void check_shape(const MarketShape& shape) {
  if (shape.schools == 0) throw InputError("market needs at least one school");
  if (shape.reserved > shape.quota) {
    throw InputError("reserved quota " + std::to_string(shape.reserved) +
                     " exceeds quota " + std::to_string(shape.quota));
  }
}

std::vector<Student> draw_students(const MarketShape& shape) {
  std::mt19937_64 rng(derive_seed(shape.seed, "preferences"));
  const std::uint32_t len =
      std::min(shape.schools, shape.list_length.value_or(shape.schools));
  std::vector<SchoolId> perm(shape.schools);
  std::vector<Student> students;
  const std::uint32_t total = shape.advantaged + shape.disadvantaged;
  students.reserve(total);
  for (std::uint32_t s = 0; s < total; ++s) {
    std::iota(perm.begin(), perm.end(), SchoolId{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    students.push_back(Student{
        s < shape.advantaged ? Group::Advantaged : Group::Disadvantaged,
        std::vector<SchoolId>(perm.begin(), perm.begin() + len)});
  }
  return students;
}

GeneratedMarket assemble(const MarketShape& shape,
                         std::vector<StudentId> order,
                         std::vector<double> scores) {
  GeneratedMarket out;
  out.instance = Instance::with_universal_priority(
      draw_students(shape),
      std::vector<std::uint32_t>(shape.schools, shape.quota),
      PriorityOrder::from_order(std::move(order)));
  out.quotas = ReservationQuotas(
      std::vector<std::uint32_t>(shape.schools, shape.reserved));
  out.scores = std::move(scores);
  return out;
}

// Places the k-th advantaged slot on student k and the k-th disadvantaged
// slot on student advantaged + k.
std::vector<StudentId> order_from_groups(const std::vector<Group>& merged,
                                         std::uint32_t advantaged) {
  std::vector<StudentId> order;
  order.reserve(merged.size());
  StudentId next_adv = 0;
  StudentId next_dis = advantaged;
  for (Group g : merged) {
    order.push_back(g == Group::Advantaged ? next_adv++ : next_dis++);
  }
  return order;
}

std::vector<StudentId> order_from_scores(const std::vector<double>& scores,
                                         std::uint64_t seed) {
  std::vector<StudentId> lottery(scores.size());
  std::iota(lottery.begin(), lottery.end(), StudentId{0});
  std::mt19937_64 rng(derive_seed(seed, "lottery"));
  std::shuffle(lottery.begin(), lottery.end(), rng);
  std::vector<StudentId> order(scores.size());
  std::iota(order.begin(), order.end(), StudentId{0});
  std::sort(order.begin(), order.end(), [&](StudentId a, StudentId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return lottery[a] < lottery[b];
  });
  return order;
}

std::vector<double> draw_scores(const MarketShape& shape,
                                const NormalParams& p) {
  if (!(p.sd_advantaged > 0.0) || !(p.sd_disadvantaged > 0.0)) {
    throw InputError("score standard deviations must be positive");
  }
  std::mt19937_64 rng(derive_seed(shape.seed, "potentials"));
  std::normal_distribution<double> adv(p.mean_advantaged, p.sd_advantaged);
  std::normal_distribution<double> dis(p.mean_disadvantaged,
                                       p.sd_disadvantaged);
  std::vector<double> scores(shape.advantaged + shape.disadvantaged);
  for (std::uint32_t s = 0; s < scores.size(); ++s) {
    scores[s] = s < shape.advantaged ? adv(rng) : dis(rng);
  }
  return scores;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index) {
  std::uint64_t h = splitmix(seed);
  for (unsigned char ch : label) h = splitmix(h ^ ch);
  return splitmix(h ^ splitmix(index));
}

InterleavePolicy InterleavePolicy::explicit_order(std::vector<Group> merged) {
  InterleavePolicy p;
  p.kind = Kind::kExplicit;
  p.merged = std::move(merged);
  return p;
}

InterleavePolicy InterleavePolicy::biased(double bias) {
  InterleavePolicy p;
  p.kind = Kind::kBiasedRandom;
  p.bias = bias;
  return p;
}

InterleavePolicy InterleavePolicy::potentials(const NormalParams& params) {
  InterleavePolicy p;
  p.kind = Kind::kNormalPotentials;
  p.normal = params;
  return p;
}

GeneratedMarket gen_homogeneous(const HomogeneousMarketConfig& config) {
  const MarketShape shape{config.schools,  config.advantaged,
                          config.disadvantaged, config.quota,
                          config.reserved, config.list_length,
                          config.seed};
  check_shape(shape);
  const auto& policy = config.interleave;
  switch (policy.kind) {
    case InterleavePolicy::Kind::kExplicit: {
      const auto adv = static_cast<std::uint32_t>(std::count(
          policy.merged.begin(), policy.merged.end(), Group::Advantaged));
      if (policy.merged.size() != config.advantaged + config.disadvantaged ||
          adv != config.advantaged) {
        throw InputError("explicit merged order does not match group sizes");
      }
      return assemble(shape, order_from_groups(policy.merged, adv), {});
    }
    case InterleavePolicy::Kind::kBiasedRandom: {
      if (!(policy.bias > 0.0)) throw InputError("bias must be positive");
      std::mt19937_64 rng(derive_seed(config.seed, "interleave"));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::vector<Group> merged;
      double a = config.advantaged;
      double d = config.disadvantaged;
      while (a + d > 0) {
        const double p_adv = policy.bias * a / (policy.bias * a + d);
        if (unit(rng) < p_adv) {
          merged.push_back(Group::Advantaged);
          a -= 1;
        } else {
          merged.push_back(Group::Disadvantaged);
          d -= 1;
        }
      }
      return assemble(shape, order_from_groups(merged, config.advantaged), {});
    }
    case InterleavePolicy::Kind::kNormalPotentials: {
      auto scores = draw_scores(shape, policy.normal);
      auto order = order_from_scores(scores, config.seed);
      return assemble(shape, std::move(order), std::move(scores));
    }
  }
  throw std::logic_error("unknown interleave policy");
}

GeneratedMarket gen_normal_potentials(const NormalPotentialConfig& config) {
  HomogeneousMarketConfig h;
  h.schools = config.schools;
  h.advantaged = config.advantaged;
  h.disadvantaged = config.disadvantaged;
  h.quota = config.quota;
  h.reserved = config.reserved;
  h.interleave = InterleavePolicy::potentials(config.normal);
  h.seed = config.seed;
  h.list_length = config.list_length;
  return gen_homogeneous(h);
}

Thm43Check thm43_ranks(std::uint32_t schools, std::uint32_t quota,
                       std::uint32_t reserved, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("epsilon must lie strictly between 0 and 1");
  }
  const double n = schools;
  const double nlogn = n * std::log(n);
  const double general = static_cast<double>(quota) - reserved;
  const auto ceil_rank = [](double x) {
    return static_cast<std::uint64_t>(std::max(1.0, std::ceil(x - 1e-9)));
  };
  Thm43Check out;
  out.r_advantaged = ceil_rank(nlogn + general * n * log_log(n));
  out.r_advantaged_cover = ceil_rank(nlogn + (general - 1) * n * log_log(n));
  out.r_disadvantaged = ceil_rank((1.0 - eps) * reserved * n);
  out.proxy_advantaged =
      static_cast<std::uint64_t>(n + n * std::max(0.0, general));
  out.proxy_disadvantaged = static_cast<std::uint64_t>(reserved) * schools;
  out.reserve_exceeds_n_log_n = reserved > nlogn;
  out.structural =
      static_cast<double>(quota) - 1 > reserved && out.reserve_exceeds_n_log_n;
  return out;
}

Thm43Check check_thm43_hypothesis(const Instance& inst, std::uint32_t quota,
                                  std::uint32_t reserved, double eps) {
  auto out = thm43_ranks(static_cast<std::uint32_t>(inst.num_schools()), quota,
                         reserved, eps);
  if (!inst.universal_priority || inst.num_schools() == 0) {
    throw InputError("rank condition needs a universal priority order");
  }
  // Overall position of the k-th (1-based) student of each group.
  std::vector<std::uint64_t> adv_pos, dis_pos;
  const auto& order = inst.schools.front().priority.order();
  for (std::uint64_t r = 0; r < order.size(); ++r) {
    (inst.is_disadvantaged(order[r]) ? dis_pos : adv_pos).push_back(r);
  }
  const auto condition = [&](std::uint64_t r_adv) {
    if (r_adv > adv_pos.size()) return false;
    if (out.r_disadvantaged > dis_pos.size()) return true;
    return adv_pos[r_adv - 1] < dis_pos[out.r_disadvantaged - 1];
  };
  out.holds = condition(out.r_advantaged);
  out.holds_cover = condition(out.r_advantaged_cover);
  return out;
}

Thm44Check check_thm44_condition(const NormalParams& params,
                                 double p_advantaged,
                                 double p_disadvantaged) {
  const auto in_unit = [](double p) { return p > 0.0 && p < 1.0; };
  if (!in_unit(p_advantaged) || !in_unit(p_disadvantaged)) {
    throw std::invalid_argument("p values must lie strictly between 0 and 1");
  }
  Thm44Check out;
  out.lhs = params.mean_advantaged - params.mean_disadvantaged;
  out.rhs = 0.008 * (params.sd_advantaged + params.sd_disadvantaged) +
            (params.sd_advantaged * std::log(1.0 / p_advantaged - 1.0) -
             params.sd_disadvantaged * std::log(1.0 / p_disadvantaged - 1.0)) /
                1.702;
  out.holds = out.lhs > out.rhs;
  return out;
}

Thm44Probabilities thm44_probabilities(std::uint32_t schools,
                                       std::uint32_t quota,
                                       std::uint32_t reserved,
                                       std::uint32_t advantaged,
                                       std::uint32_t disadvantaged,
                                       double eps) {
  const double n = schools;
  const double general = static_cast<double>(quota) - reserved;
  Thm44Probabilities out;
  out.p_advantaged =
      (n * std::log(n) + (general - 1) * n * log_log(n)) / advantaged;
  out.p_disadvantaged = (1.0 + eps) * reserved * n / disadvantaged;
  return out;
}

double normal_quantile_approx(double alpha, double mean, double sd) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie strictly between 0 and 1");
  }
  return mean + sd * std::log(1.0 / alpha - 1.0) / -1.702;
}

BallsInBinsStats balls_in_bins_stats(std::uint32_t bins,
                                     std::uint32_t threshold,
                                     std::uint32_t trials,
                                     std::uint64_t seed) {
  if (bins == 0 || threshold == 0) {
    throw std::invalid_argument("bins and threshold must be positive");
  }
  BallsInBinsStats out;
  out.first_overflow.reserve(trials);
  out.cover_time.reserve(trials);
  std::vector<std::uint32_t> load(bins);
  for (std::uint32_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, "balls", t));
    std::uniform_int_distribution<std::uint32_t> pick(0, bins - 1);
    std::fill(load.begin(), load.end(), 0);
    std::uint32_t below = bins;  // bins holding fewer than threshold
    std::uint64_t overflow = 0, cover = 0;
    for (std::uint64_t ball = 1; overflow == 0 || cover == 0; ++ball) {
      auto& b = load[pick(rng)];
      if (b == threshold && overflow == 0) overflow = ball;
      if (++b == threshold && --below == 0) cover = ball;
    }
    out.first_overflow.push_back(overflow);
    out.cover_time.push_back(cover);
  }
  return out;
}

double erdos_renyi_cover_prediction(std::uint32_t bins,
                                    std::uint32_t threshold) {
  const double n = bins;
  return n * std::log(n) + (threshold - 1.0) * n * log_log(n);
}

double erdos_renyi_limit_cdf(double x, std::uint32_t threshold) {
  return std::exp(-std::exp(-x) / std::tgamma(static_cast<double>(threshold)));
}

double empirical_quantile(std::vector<std::uint64_t> values, double p) {
  if (values.empty()) throw std::invalid_argument("no samples");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p outside [0,1]");
  std::sort(values.begin(), values.end());
  const auto idx = static_cast<std::size_t>(
      std::max(1.0, std::ceil(p * static_cast<double>(values.size()))));
  return static_cast<double>(values[idx - 1]);
}

ProportionEstimate wilson_interval(std::uint32_t successes,
                                   std::uint32_t trials) {
  ProportionEstimate out;
  out.successes = successes;
  out.trials = trials;
  if (trials == 0) return out;
  constexpr double z = 1.959963984540054;
  const double n = trials;
  const double p = successes / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  out.rate = p;
  out.lower = std::max(0.0, centre - half);
  out.upper = std::min(1.0, centre + half);
  return out;
}

ProportionEstimate monte_carlo_hc_rate(const HomogeneousMarketConfig& config,
                                       std::uint32_t trials,
                                       std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  std::uint32_t hits = 0;
  for (std::uint32_t t = 0; t < trials; ++t) {
    auto trial = config;
    trial.seed = derive_seed(seed, "hc-trial", t);
    const auto market = gen_homogeneous(trial);
    if (check_high_competitiveness(market.instance, market.quotas).holds) {
      ++hits;
    }
  }
  return wilson_interval(hits, trials);
}

ProportionEstimate monte_carlo_hc_rate(const NormalPotentialConfig& config,
                                       std::uint32_t trials,
                                       std::uint64_t seed) {
  HomogeneousMarketConfig h;
  h.schools = config.schools;
  h.advantaged = config.advantaged;
  h.disadvantaged = config.disadvantaged;
  h.quota = config.quota;
  h.reserved = config.reserved;
  h.interleave = InterleavePolicy::potentials(config.normal);
  h.list_length = config.list_length;
  return monte_carlo_hc_rate(h, trials, seed);
}

}  // namespace reserve
