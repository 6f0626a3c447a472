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

// Student-proposing deferred acceptance over arbitrary choice profiles, and
// the four mechanisms built on it.

#ifndef RESERVE_SDA_H_
#define RESERVE_SDA_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "reserve/choice.h"
#include "reserve/model.h"

namespace reserve {

// One choice rule per school. References the instance's priority orders and
// must not outlive it; group labels are owned by the profile.
class ChoiceProfile {
 public:
  // Contexts built by the caller; their group spans must stay valid.
  ChoiceProfile(const Instance& inst, std::vector<ChoiceContext> contexts);

  // BASE ignores `quotas`.
  static ChoiceProfile build(Mechanism mechanism, const Instance& inst,
                             const ReservationQuotas& quotas);
  // BASE rules with per-school capacities overriding the instance quotas.
  static ChoiceProfile responsive(const Instance& inst,
                                  std::span<const std::uint32_t> capacities);

  const ChoiceContext& at(SchoolId c) const { return contexts_[c]; }
  std::size_t size() const { return contexts_.size(); }
  bool is_responsive() const;

 private:
  ChoiceProfile() = default;

  std::shared_ptr<const std::vector<Group>> groups_;
  std::vector<ChoiceContext> contexts_;
};

struct RoundTrace {
  std::uint32_t round = 0;
  std::vector<std::pair<StudentId, SchoolId>> applications;
  std::vector<std::pair<StudentId, SchoolId>> rejections;
};

struct SdaOptions {
  // Students allowed to apply; empty means everyone.
  std::vector<bool> participants;
  // Collects per-round applications and rejections.
  std::vector<RoundTrace>* trace = nullptr;
};

// Round-based DA: each round every unassigned student applies to their best
// school that has not rejected them, and each school keeps
// C_c(held + applicants). Returns the student-optimal stable matching.
// Throws InvariantError if the round cap (students x longest list + 1) is
// exceeded.
Matching sda_rounds(const Instance& inst, const ChoiceProfile& profile,
                    const SdaOptions& options = {});

// A free student together with the school they would apply to next.
struct PendingProposal {
  StudentId student;
  SchoolId school;
};
// Picks which pending proposal goes next; returns an index into `pending`.
using ProposalPolicy =
    std::function<std::size_t(std::span<const PendingProposal> pending)>;

// Lowest student id first.
ProposalPolicy lowest_id_first();
// Uniformly random among pending proposals.
ProposalPolicy random_order(std::uint64_t seed);

// One-proposal-at-a-time DA. Only valid for responsive profiles (throws
// std::invalid_argument otherwise); the result equals sda_rounds for every
// policy.
Matching sda_sequential(const Instance& inst, const ChoiceProfile& profile,
                        const ProposalPolicy& policy);

enum class SeatType : std::uint8_t { kNone, kGeneral, kReserved };

struct DiscStages {
  Matching general;           // stage 1: all students, general seats
  Matching reserved;          // stage 2: unmatched disadvantaged, q^R
  Matching dereserved;        // stage 3: unmatched advantaged, leftover q^R
  std::vector<std::uint32_t> leftover;  // q^R_c - |stage 2 at c|
};

struct MechanismRun {
  Mechanism mechanism = Mechanism::kBase;
  ReservationQuotas quotas;
  Matching matching;
  std::optional<DiscStages> stages;  // DISC only
  std::vector<RoundTrace> trace;     // empty unless requested
};

// Three-stage Discovery Program. Vacant reserved seats after stage 2 go to
// advantaged students left unmatched by stage 1 only.
MechanismRun run_disc(const Instance& inst, const ReservationQuotas& quotas,
                      bool trace = false);

MechanismRun run_mechanism(Mechanism mechanism, const Instance& inst,
                           const ReservationQuotas& quotas,
                           bool trace = false);

}  // namespace reserve

#endif  // RESERVE_SDA_H_
