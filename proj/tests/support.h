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

// Shared helpers for the test binaries: random small markets and
// independent reference implementations used as oracles.

#ifndef RESERVE_TESTS_SUPPORT_H_
#define RESERVE_TESTS_SUPPORT_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "reserve/choice.h"
#include "reserve/model.h"

namespace reserve::testing {

struct RandomMarket {
  Instance instance;
  ReservationQuotas quotas;
};

struct MarketShape {
  std::uint32_t max_students = 8;
  std::uint32_t max_schools = 4;
  std::uint32_t max_quota = 3;
  bool universal = true;
  bool allow_short_lists = true;
};

inline PriorityOrder random_priority(std::size_t n, std::mt19937_64& rng) {
  std::vector<StudentId> order(n);
  std::iota(order.begin(), order.end(), StudentId{0});
  std::shuffle(order.begin(), order.end(), rng);
  return PriorityOrder::from_order(std::move(order));
}

inline RandomMarket random_market(std::mt19937_64& rng,
                                  const MarketShape& shape = {}) {
  auto pick = [&](std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
  };
  const auto n = pick(1, shape.max_students);
  const auto m = pick(1, shape.max_schools);
  RandomMarket out;
  auto& inst = out.instance;
  for (std::uint32_t s = 0; s < n; ++s) {
    Student st;
    st.group = pick(0, 1) ? Group::Disadvantaged : Group::Advantaged;
    std::vector<SchoolId> all(m);
    std::iota(all.begin(), all.end(), SchoolId{0});
    std::shuffle(all.begin(), all.end(), rng);
    const auto len = shape.allow_short_lists ? pick(0, m) : m;
    st.preferences.assign(all.begin(), all.begin() + len);
    inst.students.push_back(std::move(st));
  }
  const auto shared = random_priority(n, rng);
  std::vector<std::uint32_t> reserved;
  for (std::uint32_t c = 0; c < m; ++c) {
    School school;
    school.quota = pick(1, shape.max_quota);
    school.priority = shape.universal ? shared : random_priority(n, rng);
    reserved.push_back(pick(0, school.quota));
    inst.schools.push_back(std::move(school));
  }
  inst.universal_priority = shape.universal;
  out.quotas = ReservationQuotas(std::move(reserved));
  return out;
}

// Top-k of `pool` by priority, computed by full sort.
inline std::vector<StudentId> top_k(std::vector<StudentId> pool,
                                    const PriorityOrder& priority,
                                    std::size_t k) {
  std::sort(pool.begin(), pool.end(), [&](StudentId a, StudentId b) {
    return priority.prefers(a, b);
  });
  if (pool.size() > k) pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

inline std::vector<StudentId> minus(std::vector<StudentId> a,
                                    const std::vector<StudentId>& b) {
  std::erase_if(a, [&](StudentId s) {
    return std::find(b.begin(), b.end(), s) != b.end();
  });
  return a;
}

inline std::vector<StudentId> merged(std::vector<StudentId> a,
                                     const std::vector<StudentId>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

// Reference choice rules written directly from the set formulas.
inline std::vector<StudentId> oracle_choose(Mechanism mech,
                                            const Instance& inst,
                                            SchoolId c, std::uint32_t reserved,
                                            std::vector<StudentId> pool) {
  const auto& pr = inst.schools[c].priority;
  const std::uint32_t q = inst.schools[c].quota;
  std::vector<StudentId> dis;
  for (StudentId s : pool) {
    if (inst.is_disadvantaged(s)) dis.push_back(s);
  }
  switch (mech) {
    case Mechanism::kBase:
      return top_k(pool, pr, q);
    case Mechanism::kMr: {
      const auto r = top_k(dis, pr, reserved);
      return merged(r, top_k(minus(pool, r), pr, q - r.size()));
    }
    case Mechanism::kJsa: {
      const auto g = top_k(pool, pr, q - reserved);
      const auto r = top_k(minus(dis, g), pr, reserved);
      const auto gr = merged(g, r);
      return merged(gr, top_k(minus(pool, gr), pr, q - gr.size()));
    }
    case Mechanism::kDisc:
      break;
  }
  return {};
}

// Every matching that respects lists and quotas.
inline void for_each_matching(
    const Instance& inst,
    const std::function<void(const std::vector<std::optional<SchoolId>>&)>&
        visit) {
  const auto n = inst.num_students();
  std::vector<std::optional<SchoolId>> a(n);
  std::vector<std::uint32_t> load(inst.num_schools(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t s) {
    if (s == n) {
      visit(a);
      return;
    }
    a[s].reset();
    rec(s + 1);
    for (SchoolId c : inst.students[s].preferences) {
      if (load[c] >= inst.schools[c].quota) continue;
      ++load[c];
      a[s] = c;
      rec(s + 1);
      --load[c];
    }
    a[s].reset();
  };
  rec(0);
}

using ChoiceOracle =
    std::function<std::vector<StudentId>(SchoolId, std::vector<StudentId>)>;

// Stability under choice rules: each school would keep its assignment, and
// no student would be chosen by a school they prefer.
inline bool oracle_stable(const Instance& inst,
                          const std::vector<std::optional<SchoolId>>& a,
                          const ChoiceOracle& choose) {
  const auto m = inst.num_schools();
  std::vector<std::vector<StudentId>> at(m);
  for (StudentId s = 0; s < a.size(); ++s) {
    if (a[s]) at[*a[s]].push_back(s);
  }
  for (SchoolId c = 0; c < m; ++c) {
    if (choose(c, at[c]) != at[c]) return false;
  }
  for (StudentId s = 0; s < a.size(); ++s) {
    for (SchoolId c : inst.students[s].preferences) {
      if (a[s] && *a[s] == c) break;
      auto pool = at[c];
      pool.push_back(s);
      std::sort(pool.begin(), pool.end());
      const auto chosen = choose(c, pool);
      if (std::find(chosen.begin(), chosen.end(), s) != chosen.end()) {
        return false;
      }
    }
  }
  return true;
}

inline std::size_t position(const Instance& inst, StudentId s,
                            const std::optional<SchoolId>& c) {
  if (!c) return inst.students[s].preferences.size();
  const auto& p = inst.students[s].preferences;
  return static_cast<std::size_t>(std::find(p.begin(), p.end(), *c) -
                                  p.begin());
}

}  // namespace reserve::testing

#endif  // RESERVE_TESTS_SUPPORT_H_
