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

// Fairness and comparison analytics over matchings: in-group blocking pairs,
// dominance between matchings for one group, rank-change histograms, the
// high-competitiveness and smart-reserve conditions, and searches for
// profitable misreports and harmful priority improvements.

#ifndef RESERVE_AUDIT_H_
#define RESERVE_AUDIT_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "reserve/choice.h"
#include "reserve/model.h"
#include "reserve/sda.h"

namespace reserve {

struct BlockingPair {
  enum class Scope : std::uint8_t {
    kDisadvantagedInGroup,
    kAdvantagedInGroup,
    kClassical,
  };
  StudentId student;
  SchoolId school;
  // Displaced lower-priority student; nullopt means a vacant seat.
  std::optional<StudentId> witness;
  Scope scope;

  friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

// Every (s, c) with s in `group`, c preferred to s's assignment, and some
// student of the same group at c with lower priority than s. The witness is
// the lowest-priority such student.
std::vector<BlockingPair> find_in_group_blocking_pairs(const Instance& inst,
                                                       const Matching& m,
                                                       Group group);

// Pairs blocking m under the given choice rules: c preferred by s and
// s in C_c(m(c) + s).
std::vector<BlockingPair> find_blocking_pairs(const Instance& inst,
                                              const Matching& m,
                                              const ChoiceProfile& profile);

// Distinct students appearing in any pair, as the blocking student or the
// displaced witness.
std::size_t affected_students(const std::vector<BlockingPair>& pairs);

struct DominanceVerdict {
  enum class Kind : std::uint8_t {
    kEqual,            // no group member has a strict preference
    kParetoDominates,  // first weakly better for all, strictly for some
    kParetoDominated,  // mirror image
    kIncomparable,
  };
  Kind kind = Kind::kEqual;
  std::vector<StudentId> prefer_first;
  std::vector<StudentId> prefer_second;

  bool first_weakly_dominates() const {
    return kind == Kind::kEqual || kind == Kind::kParetoDominates;
  }
  bool second_weakly_dominates() const {
    return kind == Kind::kEqual || kind == Kind::kParetoDominated;
  }
};

std::string_view to_string(DominanceVerdict::Kind k);

DominanceVerdict compare_for_group(const Instance& inst, const Matching& first,
                                   const Matching& second, Group group);

// Change in assigned rank from a baseline to another matching. Transitions
// to or from unmatched are categorical; unmatched in both is a numeric 0.
struct RankDelta {
  enum class Kind : std::uint8_t { kNumeric, kGainedSeat, kLostSeat };
  Kind kind = Kind::kNumeric;
  std::int32_t delta = 0;  // other - baseline; kNumeric only

  static RankDelta numeric(std::int32_t d) { return {Kind::kNumeric, d}; }
  static RankDelta gained() { return {Kind::kGainedSeat, 0}; }
  static RankDelta lost() { return {Kind::kLostSeat, 0}; }

  friend auto operator<=>(const RankDelta&, const RankDelta&) = default;
};

RankDelta rank_delta(const Instance& inst, StudentId s,
                     const Matching& baseline, const Matching& other);

using RankHistogram = std::map<RankDelta, std::size_t>;
RankHistogram rank_change_histogram(const Instance& inst,
                                    const Matching& baseline,
                                    const Matching& other, Group group);

struct HighCompetitiveness {
  bool holds = false;
  // q^R_c - |MR(c) cap S^m|, per school; negative where the condition fails.
  std::vector<std::int64_t> slack;
  Matching mr;
};

// |MR(c) cap S^m| <= q^R_c at every school.
HighCompetitiveness check_high_competitiveness(const Instance& inst,
                                               const ReservationQuotas& quotas);
HighCompetitiveness check_high_competitiveness(const Instance& inst,
                                               const ReservationQuotas& quotas,
                                               const Matching& mr);

// q^R_c >= |BASE(c) cap S^m| at every school.
bool check_smart_reserve(const Instance& inst, const ReservationQuotas& quotas);
bool check_smart_reserve(const Instance& inst, const ReservationQuotas& quotas,
                         const Matching& base);

struct JsaVersusMr {
  bool highly_competitive = false;
  DominanceVerdict verdict;  // JSA (first) versus MR (second), disadvantaged
  // Highly competitive, yet JSA does not weakly dominate MR.
  bool theorem_violation = false;
};

JsaVersusMr verify_jsa_dominates_mr(const Instance& inst,
                                    const ReservationQuotas& quotas);

struct ManipulationWitness {
  StudentId student;
  std::vector<SchoolId> misreport;
  std::optional<SchoolId> truthful_outcome;
  std::optional<SchoolId> manipulated_outcome;
};

// Searches single-student misreports: every truncation of every list; every
// ordered sublist when the list has at most four schools; `budget` random
// ordered sublists per student otherwise.
std::optional<ManipulationWitness> probe_strategyproofness(
    Mechanism mechanism, const Instance& inst, const ReservationQuotas& quotas,
    std::size_t budget, std::uint64_t seed);

struct ImprovementWitness {
  enum class Probe : std::uint8_t {
    kImprovement,       // moving up from the reported priorities hurts
    kUnderperformance,  // moving down from the reported priorities helps
  };
  StudentId student;
  Probe probe;
  // School whose priority changed; nullopt when every school changed
  // together under a universal priority order.
  std::optional<SchoolId> school;
  std::optional<SchoolId> lower_priority_outcome;
  std::optional<SchoolId> higher_priority_outcome;
};

// Swaps a student with the adjacent student above (and, as the inverse
// probe, below) and checks that the higher-priority standing never yields a
// strictly worse school. Universal priorities swap at every school at once;
// otherwise each school is probed separately. `budget` bounds the number of
// students probed (all students when budget >= number of students).
std::optional<ImprovementWitness> probe_respect_improvements(
    Mechanism mechanism, const Instance& inst, const ReservationQuotas& quotas,
    std::size_t budget, std::uint64_t seed);

struct SchoolAdmits {
  std::size_t admitted = 0;
  std::size_t disadvantaged = 0;
  // disadvantaged / admitted, 0 for an empty school.
  double disadvantaged_share = 0.0;
};

struct AuditReport {
  Mechanism mechanism = Mechanism::kBase;
  std::vector<BlockingPair> disadvantaged_pairs;
  std::vector<BlockingPair> advantaged_pairs;
  std::size_t disadvantaged_affected = 0;
  std::size_t advantaged_affected = 0;
  // Versus the baseline matching, one histogram per group.
  RankHistogram disadvantaged_rank_change;
  RankHistogram advantaged_rank_change;
  std::vector<SchoolAdmits> admits;
  bool highly_competitive = false;
  bool smart_reserve = false;
};

std::vector<SchoolAdmits> admitted_by_school(const Instance& inst,
                                             const Matching& m);

// `baseline` is the BASE matching on the same instance.
AuditReport audit_matching(const Instance& inst,
                           const ReservationQuotas& quotas,
                           Mechanism mechanism, const Matching& m,
                           const Matching& baseline);

}  // namespace reserve

#endif  // RESERVE_AUDIT_H_
