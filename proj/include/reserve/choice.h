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

// School-side choice functions. Every rule is a sequence of selection passes;
// each pass takes the highest-priority not-yet-chosen candidates that satisfy
// a group filter, up to a fixed count or up to the seats still open.
//
//   BASE: [any, q]
//   MR:   [disadvantaged, q^R] [any, remaining]
//   JSA:  [any, q^G] [disadvantaged, q^R] [any, remaining]
//
// Also provides checkers for substitutability, consistency and
// q-acceptance, exhaustive on small universes and sampled otherwise.

#ifndef RESERVE_CHOICE_H_
#define RESERVE_CHOICE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "reserve/model.h"

namespace reserve {

enum class Mechanism : std::uint8_t { kBase, kDisc, kMr, kJsa };

std::string_view to_string(Mechanism m);
// Accepts "base", "disc", "mr", "jsa" in any case. Throws InputError.
Mechanism parse_mechanism(std::string_view name);

// Sorted by student id throughout.
using StudentSet = std::vector<StudentId>;

// The min(k, |candidates|) candidates with the best priority ranks, sorted by
// student id.
StudentSet max_select(std::span<const StudentId> candidates,
                      const PriorityOrder& priority, std::uint32_t k);

struct SelectionPass {
  enum class Filter : std::uint8_t { kAny, kDisadvantaged };
  Filter filter = Filter::kAny;
  // nullopt: every seat not yet filled by earlier passes.
  std::optional<std::uint32_t> seats;
};

// One school's selection rule. References the priority order and group
// labels of the instance it was built from; that instance must outlive it.
class ChoiceContext {
 public:
  // DISC is not a choice rule; passing it throws std::invalid_argument.
  ChoiceContext(Mechanism mechanism, const PriorityOrder& priority,
                std::uint32_t quota, std::uint32_t reserved,
                std::span<const Group> groups);

  Mechanism mechanism() const { return mechanism_; }
  const PriorityOrder& priority() const { return *priority_; }
  std::uint32_t quota() const { return quota_; }
  std::uint32_t reserved() const { return reserved_; }
  std::span<const Group> groups() const { return groups_; }
  const std::vector<SelectionPass>& passes() const { return passes_; }

  // q-responsive: BASE, or any rule with nothing reserved.
  bool is_responsive() const {
    return mechanism_ == Mechanism::kBase || reserved_ == 0;
  }

 private:
  Mechanism mechanism_;
  const PriorityOrder* priority_;
  std::uint32_t quota_;
  std::uint32_t reserved_;
  std::span<const Group> groups_;
  std::vector<SelectionPass> passes_;
};

// C_c(pool), sorted by student id. `pool` may be in any order but must not
// contain duplicates.
StudentSet choose(const ChoiceContext& ctx, std::span<const StudentId> pool);

// As choose(), additionally reporting the pass index that selected each
// chosen student (parallel to the result).
struct PassSelection {
  StudentSet chosen;
  std::vector<std::uint8_t> pass_of;
};
PassSelection choose_with_passes(const ChoiceContext& ctx,
                                 std::span<const StudentId> pool);

// Generic rule over student sets, used by the axiom checkers so that
// arbitrary (including deliberately broken) rules can be audited.
using ChoiceRule = std::function<StudentSet(std::span<const StudentId>)>;
ChoiceRule as_rule(const ChoiceContext& ctx);

// Universes up to this size are checked over every subset pair.
inline constexpr std::size_t kExhaustiveUniverseLimit = 12;

struct SubstitutabilityViolation {
  StudentSet s1;
  StudentSet s2;
  StudentId student;
};
struct ConsistencyViolation {
  StudentSet s1;
  StudentSet s2;
};
struct AcceptanceViolation {
  StudentSet s1;
};

// s in C(S1) and S2 subset of S1, yet s not in C(S2 + s).
std::optional<SubstitutabilityViolation> check_substitutable(
    const ChoiceRule& rule, std::span<const StudentId> universe,
    std::size_t budget, std::uint64_t seed);
// C(S1) subset of S2 subset of S1, yet C(S2) != C(S1).
std::optional<ConsistencyViolation> check_consistent(
    const ChoiceRule& rule, std::span<const StudentId> universe,
    std::size_t budget, std::uint64_t seed);
// |C(S1)| != min(q, |S1|) or C(S1) not within S1.
std::optional<AcceptanceViolation> check_q_acceptant(
    const ChoiceRule& rule, std::uint32_t quota,
    std::span<const StudentId> universe, std::size_t budget,
    std::uint64_t seed);

std::optional<SubstitutabilityViolation> check_substitutable(
    const ChoiceContext& ctx, std::span<const StudentId> universe,
    std::size_t budget, std::uint64_t seed);
std::optional<ConsistencyViolation> check_consistent(
    const ChoiceContext& ctx, std::span<const StudentId> universe,
    std::size_t budget, std::uint64_t seed);
std::optional<AcceptanceViolation> check_q_acceptant(
    const ChoiceContext& ctx, std::span<const StudentId> universe,
    std::size_t budget, std::uint64_t seed);

}  // namespace reserve

#endif  // RESERVE_CHOICE_H_
