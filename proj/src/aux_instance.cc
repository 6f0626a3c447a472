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

#include "reserve/aux_instance.h"

#include <stdexcept>
#include <string>

namespace reserve {

namespace {

PriorityOrder disadvantaged_first(const Instance& inst,
                                  const PriorityOrder& priority) {
  std::vector<StudentId> order;
  order.reserve(priority.size());
  for (StudentId s : priority.order()) {
    if (inst.is_disadvantaged(s)) order.push_back(s);
  }
  for (StudentId s : priority.order()) {
    if (!inst.is_disadvantaged(s)) order.push_back(s);
  }
  return PriorityOrder::from_order(std::move(order));
}

std::vector<SchoolId> expand(const std::vector<SchoolId>& prefs,
                             Mechanism mechanism) {
  std::vector<SchoolId> out;
  out.reserve(2 * prefs.size());
  switch (mechanism) {
    case Mechanism::kMr:
      for (SchoolId c : prefs) {
        out.push_back(reserved_part(c));
        out.push_back(general_part(c));
      }
      break;
    case Mechanism::kJsa:
      for (SchoolId c : prefs) {
        out.push_back(general_part(c));
        out.push_back(reserved_part(c));
      }
      break;
    case Mechanism::kDisc:
      for (SchoolId c : prefs) out.push_back(general_part(c));
      for (SchoolId c : prefs) out.push_back(reserved_part(c));
      break;
    case Mechanism::kBase:
      throw std::invalid_argument("BASE has no auxiliary instance");
  }
  return out;
}

}  // namespace

AuxInstance build_aux(const Instance& inst, const ReservationQuotas& quotas,
                      Mechanism mechanism) {
  if (mechanism == Mechanism::kBase) {
    throw std::invalid_argument("BASE has no auxiliary instance");
  }
  if (quotas.size() != inst.num_schools()) {
    throw InputError("reservation quotas do not cover every school");
  }
  AuxInstance aux;
  aux.mechanism = mechanism;
  aux.original_schools = inst.num_schools();
  auto& out = aux.instance;
  out.universal_priority = false;
  out.schools.reserve(2 * inst.num_schools());
  for (SchoolId c = 0; c < inst.num_schools(); ++c) {
    const auto& school = inst.schools[c];
    out.schools.push_back(School{quotas.general(inst, c), school.priority});
    out.schools.push_back(
        School{quotas.reserved(c), disadvantaged_first(inst, school.priority)});
  }
  out.students.reserve(inst.num_students());
  for (const auto& st : inst.students) {
    out.students.push_back(Student{st.group, expand(st.preferences, mechanism)});
  }
  return aux;
}

Matching project(const Matching& aux_matching, const Instance& original) {
  std::vector<std::optional<SchoolId>> assignment(aux_matching.num_students());
  for (StudentId s = 0; s < aux_matching.num_students(); ++s) {
    if (const auto& c = aux_matching.school_of(s)) {
      assignment[s] = original_school(*c);
    }
  }
  Matching m(std::move(assignment), original.num_schools());
  for (SchoolId c = 0; c < original.num_schools(); ++c) {
    if (m.students_at(c).size() > original.schools[c].quota) {
      throw InvariantError("projection overfills school " + std::to_string(c));
    }
  }
  return m;
}

std::vector<SeatType> seat_types(const Matching& aux_matching) {
  std::vector<SeatType> out(aux_matching.num_students(), SeatType::kNone);
  for (StudentId s = 0; s < aux_matching.num_students(); ++s) {
    if (const auto& c = aux_matching.school_of(s)) out[s] = seat_type_of(*c);
  }
  return out;
}

EquivalenceResult check_equivalence(const Instance& inst,
                                    const ReservationQuotas& quotas,
                                    Mechanism mechanism) {
  EquivalenceResult result;
  result.direct = run_mechanism(mechanism, inst, quotas).matching;
  const auto aux = build_aux(inst, quotas, mechanism);
  const auto aux_matching = sda_rounds(
      aux.instance, ChoiceProfile::build(Mechanism::kBase, aux.instance, {}));
  result.via_aux = project(aux_matching, inst);
  for (StudentId s = 0; s < inst.num_students(); ++s) {
    if (result.direct.school_of(s) != result.via_aux.school_of(s)) {
      result.disagreeing.push_back(s);
    }
  }
  result.equal = result.disagreeing.empty();
  return result;
}

ProposalPolicy staged_disc_order(const AuxInstance& aux) {
  const auto groups = aux.instance.groups();
  return [groups](std::span<const PendingProposal> pending) -> std::size_t {
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (seat_type_of(pending[i].school) == SeatType::kGeneral) return i;
    }
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (groups[pending[i].student] == Group::Disadvantaged) return i;
    }
    return 0;
  };
}

}  // namespace reserve
