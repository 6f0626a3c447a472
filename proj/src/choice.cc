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

#include "reserve/choice.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <random>
#include <stdexcept>
#include <string>

namespace reserve {

std::string_view to_string(Mechanism m) {
  switch (m) {
    case Mechanism::kBase:
      return "base";
    case Mechanism::kDisc:
      return "disc";
    case Mechanism::kMr:
      return "mr";
    case Mechanism::kJsa:
      return "jsa";
  }
  return "?";
}

Mechanism parse_mechanism(std::string_view name) {
  std::string lower(name);
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(ch));
  if (lower == "base") return Mechanism::kBase;
  if (lower == "disc") return Mechanism::kDisc;
  if (lower == "mr") return Mechanism::kMr;
  if (lower == "jsa") return Mechanism::kJsa;
  throw InputError("unknown mechanism '" + std::string(name) +
                   "' (expected base, disc, mr or jsa)");
}

StudentSet max_select(std::span<const StudentId> candidates,
                      const PriorityOrder& priority, std::uint32_t k) {
  StudentSet out(candidates.begin(), candidates.end());
  const auto by_priority = [&](StudentId a, StudentId b) {
    return priority.prefers(a, b);
  };
  if (k < out.size()) {
    std::nth_element(out.begin(), out.begin() + k, out.end(), by_priority);
    out.resize(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ChoiceContext::ChoiceContext(Mechanism mechanism, const PriorityOrder& priority,
                             std::uint32_t quota, std::uint32_t reserved,
                             std::span<const Group> groups)
    : mechanism_(mechanism),
      priority_(&priority),
      quota_(quota),
      reserved_(mechanism == Mechanism::kBase ? 0 : reserved),
      groups_(groups) {
  using Filter = SelectionPass::Filter;
  if (reserved_ > quota_) {
    throw InputError("reserved seats " + std::to_string(reserved) +
                     " exceed quota " + std::to_string(quota));
  }
  switch (mechanism) {
    case Mechanism::kBase:
      passes_ = {{Filter::kAny, quota_}};
      break;
    case Mechanism::kMr:
      passes_ = {{Filter::kDisadvantaged, reserved_},
                 {Filter::kAny, std::nullopt}};
      break;
    case Mechanism::kJsa:
      passes_ = {{Filter::kAny, quota_ - reserved_},
                 {Filter::kDisadvantaged, reserved_},
                 {Filter::kAny, std::nullopt}};
      break;
    case Mechanism::kDisc:
      throw std::invalid_argument(
          "the discovery program has no single-school choice rule");
  }
}

PassSelection choose_with_passes(const ChoiceContext& ctx,
                                 std::span<const StudentId> pool) {
  const auto& priority = ctx.priority();
  StudentSet sorted(pool.begin(), pool.end());
  std::sort(sorted.begin(), sorted.end(), [&](StudentId a, StudentId b) {
    return priority.prefers(a, b);
  });

  std::vector<std::uint8_t> pass_of(sorted.size(), 0xff);
  std::uint32_t filled = 0;
  const auto& passes = ctx.passes();
  for (std::size_t p = 0; p < passes.size(); ++p) {
    const auto& pass = passes[p];
    const std::uint32_t open = ctx.quota() - filled;
    std::uint32_t budget = pass.seats ? std::min(*pass.seats, open) : open;
    for (std::size_t i = 0; i < sorted.size() && budget > 0; ++i) {
      if (pass_of[i] != 0xff) continue;
      if (pass.filter == SelectionPass::Filter::kDisadvantaged &&
          ctx.groups()[sorted[i]] != Group::Disadvantaged) {
        continue;
      }
      pass_of[i] = static_cast<std::uint8_t>(p);
      --budget;
      ++filled;
    }
  }

  std::vector<std::pair<StudentId, std::uint8_t>> picked;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (pass_of[i] != 0xff) picked.emplace_back(sorted[i], pass_of[i]);
  }
  std::sort(picked.begin(), picked.end());
  PassSelection out;
  out.chosen.reserve(picked.size());
  out.pass_of.reserve(picked.size());
  for (const auto& [s, p] : picked) {
    out.chosen.push_back(s);
    out.pass_of.push_back(p);
  }
  return out;
}

StudentSet choose(const ChoiceContext& ctx, std::span<const StudentId> pool) {
  return choose_with_passes(ctx, pool).chosen;
}

ChoiceRule as_rule(const ChoiceContext& ctx) {
  return [ctx](std::span<const StudentId> pool) { return choose(ctx, pool); };
}

namespace {

using Mask = std::uint32_t;

StudentSet to_set(Mask mask, std::span<const StudentId> universe) {
  StudentSet out;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (mask & (Mask{1} << i)) out.push_back(universe[i]);
  }
  return out;
}

// Choice outcome for every subset of a small universe, as bit masks.
class ChoiceTable {
 public:
  ChoiceTable(const ChoiceRule& rule, std::span<const StudentId> universe)
      : universe_(universe), table_(std::size_t{1} << universe.size()) {
    for (Mask mask = 0; mask < table_.size(); ++mask) {
      const auto chosen = rule(to_set(mask, universe));
      Mask out = 0;
      for (StudentId s : chosen) {
        const auto it = std::lower_bound(universe.begin(), universe.end(), s);
        if (it == universe.end() || *it != s) {
          out = kOutsideUniverse;
          break;
        }
        out |= Mask{1} << (it - universe.begin());
      }
      table_[mask] = out;
    }
  }

  // A rule returning students not drawn from the universe.
  static constexpr Mask kOutsideUniverse = ~Mask{0};

  Mask operator[](Mask m) const { return table_[m]; }
  Mask full() const {
    return static_cast<Mask>(table_.size() - 1);
  }
  StudentSet set(Mask m) const { return to_set(m, universe_); }
  StudentId student(int bit) const { return universe_[bit]; }

 private:
  std::span<const StudentId> universe_;
  std::vector<Mask> table_;
};

StudentSet sorted_universe(std::span<const StudentId> universe) {
  StudentSet u(universe.begin(), universe.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

StudentSet random_subset(std::span<const StudentId> from, std::mt19937_64& rng) {
  StudentSet out;
  std::bernoulli_distribution coin(0.5);
  for (StudentId s : from) {
    if (coin(rng)) out.push_back(s);
  }
  return out;
}

bool contains(const StudentSet& set, StudentId s) {
  return std::binary_search(set.begin(), set.end(), s);
}

StudentSet with(StudentSet set, StudentId s) {
  const auto it = std::lower_bound(set.begin(), set.end(), s);
  if (it == set.end() || *it != s) set.insert(it, s);
  return set;
}

StudentSet sorted_copy(StudentSet s) {
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

std::optional<SubstitutabilityViolation> check_substitutable(
    const ChoiceRule& rule, std::span<const StudentId> universe_in,
    std::size_t budget, std::uint64_t seed) {
  const auto universe = sorted_universe(universe_in);
  if (universe.size() <= kExhaustiveUniverseLimit) {
    const ChoiceTable table(rule, universe);
    for (Mask s1 = 0; s1 <= table.full(); ++s1) {
      const Mask c1 = table[s1];
      if (c1 == 0 || (c1 & ~s1) != 0) continue;
      // Every submask s2 of s1, including the empty set.
      for (Mask s2 = s1;; s2 = (s2 - 1) & s1) {
        for (Mask rest = c1; rest != 0; rest &= rest - 1) {
          const Mask bit = rest & (~rest + 1);
          if ((table[s2 | bit] & bit) == 0) {
            return SubstitutabilityViolation{
                table.set(s1), table.set(s2),
                table.student(std::countr_zero(bit))};
          }
        }
        if (s2 == 0) break;
      }
    }
    return std::nullopt;
  }

  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < budget; ++i) {
    const auto s1 = random_subset(universe, rng);
    const auto c1 = sorted_copy(rule(s1));
    if (c1.empty()) continue;
    const auto s2 = random_subset(s1, rng);
    const StudentId s =
        c1[std::uniform_int_distribution<std::size_t>(0, c1.size() - 1)(rng)];
    if (!contains(sorted_copy(rule(with(s2, s))), s)) {
      return SubstitutabilityViolation{s1, s2, s};
    }
  }
  return std::nullopt;
}

std::optional<ConsistencyViolation> check_consistent(
    const ChoiceRule& rule, std::span<const StudentId> universe_in,
    std::size_t budget, std::uint64_t seed) {
  const auto universe = sorted_universe(universe_in);
  if (universe.size() <= kExhaustiveUniverseLimit) {
    const ChoiceTable table(rule, universe);
    for (Mask s1 = 0; s1 <= table.full(); ++s1) {
      const Mask c1 = table[s1];
      if ((c1 & ~s1) != 0) {
        // Not even a subset of its input; no S2 can sit between them.
        continue;
      }
      const Mask free = s1 & ~c1;
      for (Mask extra = free;; extra = (extra - 1) & free) {
        const Mask s2 = c1 | extra;
        if (table[s2] != c1) {
          return ConsistencyViolation{table.set(s1), table.set(s2)};
        }
        if (extra == 0) break;
      }
    }
    return std::nullopt;
  }

  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < budget; ++i) {
    const auto s1 = random_subset(universe, rng);
    const auto c1 = sorted_copy(rule(s1));
    StudentSet rejected;
    std::set_difference(s1.begin(), s1.end(), c1.begin(), c1.end(),
                        std::back_inserter(rejected));
    if (!std::includes(s1.begin(), s1.end(), c1.begin(), c1.end())) continue;
    StudentSet s2 = c1;
    for (StudentId s : random_subset(rejected, rng)) s2 = with(std::move(s2), s);
    if (sorted_copy(rule(s2)) != c1) return ConsistencyViolation{s1, s2};
  }
  return std::nullopt;
}

std::optional<AcceptanceViolation> check_q_acceptant(
    const ChoiceRule& rule, std::uint32_t quota,
    std::span<const StudentId> universe_in, std::size_t budget,
    std::uint64_t seed) {
  const auto universe = sorted_universe(universe_in);
  const auto ok = [&](const StudentSet& s1) {
    const auto c1 = sorted_copy(rule(s1));
    const auto expected = std::min<std::size_t>(quota, s1.size());
    return c1.size() == expected &&
           std::includes(s1.begin(), s1.end(), c1.begin(), c1.end()) &&
           std::adjacent_find(c1.begin(), c1.end()) == c1.end();
  };
  if (universe.size() <= kExhaustiveUniverseLimit) {
    const Mask full = static_cast<Mask>((std::size_t{1} << universe.size()) - 1);
    for (Mask s1 = 0; s1 <= full; ++s1) {
      auto set = to_set(s1, universe);
      if (!ok(set)) return AcceptanceViolation{std::move(set)};
    }
    return std::nullopt;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < budget; ++i) {
    auto s1 = random_subset(universe, rng);
    if (!ok(s1)) return AcceptanceViolation{std::move(s1)};
  }
  return std::nullopt;
}

std::optional<SubstitutabilityViolation> check_substitutable(
    const ChoiceContext& ctx, std::span<const StudentId> universe,
    std::size_t budget, std::uint64_t seed) {
  return check_substitutable(as_rule(ctx), universe, budget, seed);
}

std::optional<ConsistencyViolation> check_consistent(
    const ChoiceContext& ctx, std::span<const StudentId> universe,
    std::size_t budget, std::uint64_t seed) {
  return check_consistent(as_rule(ctx), universe, budget, seed);
}

std::optional<AcceptanceViolation> check_q_acceptant(
    const ChoiceContext& ctx, std::span<const StudentId> universe,
    std::size_t budget, std::uint64_t seed) {
  return check_q_acceptant(as_rule(ctx), ctx.quota(), universe, budget, seed);
}

}  // namespace reserve
