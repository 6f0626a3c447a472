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

// Split-school reformulation: every school c becomes a general part c'
// (quota q_c - q_c^R, priority >_c) and a reserved part c'' (quota q_c^R,
// disadvantaged students ahead of advantaged ones, each block ordered by
// >_c). Running plain responsive DA on the split market, with student lists
// expanded per mechanism, reproduces MR, DISC and JSA.
//
// Aux school index 2c is c', 2c + 1 is c''.

#ifndef RESERVE_AUX_INSTANCE_H_
#define RESERVE_AUX_INSTANCE_H_

#include <vector>

#include "reserve/choice.h"
#include "reserve/model.h"
#include "reserve/sda.h"

namespace reserve {

constexpr SchoolId general_part(SchoolId c) { return 2 * c; }
constexpr SchoolId reserved_part(SchoolId c) { return 2 * c + 1; }
// The original school an aux school was split from.
constexpr SchoolId original_school(SchoolId aux) { return aux / 2; }
constexpr SeatType seat_type_of(SchoolId aux) {
  return aux % 2 == 0 ? SeatType::kGeneral : SeatType::kReserved;
}

struct AuxInstance {
  Mechanism mechanism;
  std::size_t original_schools = 0;
  Instance instance;
};

// Expanded lists:
//   MR:   c1'' c1' c2'' c2' ...
//   JSA:  c1' c1'' c2' c2'' ...
//   DISC: c1' c2' ... ck' c1'' c2'' ... ck''
// Throws std::invalid_argument for BASE.
AuxInstance build_aux(const Instance& inst, const ReservationQuotas& quotas,
                      Mechanism mechanism);

// Maps each student's aux school through original_school(). Throws
// InvariantError if an original school ends up over its quota.
Matching project(const Matching& aux_matching, const Instance& original);

// Seat type of every student in an aux matching.
std::vector<SeatType> seat_types(const Matching& aux_matching);

struct EquivalenceResult {
  bool equal = false;
  Matching direct;
  Matching via_aux;
  std::vector<StudentId> disagreeing;
};

// Runs the mechanism directly and through the aux route and compares
// per-student assignments.
EquivalenceResult check_equivalence(const Instance& inst,
                                    const ReservationQuotas& quotas,
                                    Mechanism mechanism);

// Sequential proposal order mirroring the three discovery stages on a DISC
// aux instance: proposals to general parts first, then disadvantaged
// students, then everyone else.
ProposalPolicy staged_disc_order(const AuxInstance& aux);

}  // namespace reserve

#endif  // RESERVE_AUX_INSTANCE_H_
