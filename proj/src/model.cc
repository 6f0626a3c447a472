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

#include "reserve/model.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace reserve {

std::string_view to_string(Group g) {
  return g == Group::Disadvantaged ? "disadvantaged" : "advantaged";
}

PriorityOrder PriorityOrder::from_order(std::vector<StudentId> order) {
  PriorityOrder p;
  const auto n = order.size();
  p.rank_.assign(n, std::numeric_limits<std::uint32_t>::max());
  for (std::size_t i = 0; i < n; ++i) {
    const StudentId s = order[i];
    if (s >= n || p.rank_[s] != std::numeric_limits<std::uint32_t>::max()) {
      throw InputError("priority order is not a permutation of 0.." +
                       std::to_string(n == 0 ? 0 : n - 1));
    }
    p.rank_[s] = static_cast<std::uint32_t>(i);
  }
  p.order_ = std::move(order);
  return p;
}

PriorityOrder PriorityOrder::identity(std::size_t n) {
  std::vector<StudentId> order(n);
  std::iota(order.begin(), order.end(), StudentId{0});
  return from_order(std::move(order));
}

std::optional<PriorityOrder> PriorityOrder::with_swap(StudentId s,
                                                      int direction) const {
  const std::uint32_t r = rank_[s];
  if (direction < 0 && r == 0) return std::nullopt;
  if (direction > 0 && r + 1 >= order_.size()) return std::nullopt;
  const std::uint32_t other = direction < 0 ? r - 1 : r + 1;
  PriorityOrder p = *this;
  std::swap(p.order_[r], p.order_[other]);
  p.rank_[p.order_[r]] = r;
  p.rank_[p.order_[other]] = other;
  return p;
}

std::vector<Group> Instance::groups() const {
  std::vector<Group> out;
  out.reserve(students.size());
  for (const auto& st : students) out.push_back(st.group);
  return out;
}

std::size_t Instance::count(Group g) const {
  return static_cast<std::size_t>(
      std::count_if(students.begin(), students.end(),
                    [g](const Student& st) { return st.group == g; }));
}

bool Instance::acceptable(StudentId s, SchoolId c) const {
  const auto& prefs = students[s].preferences;
  return std::find(prefs.begin(), prefs.end(), c) != prefs.end();
}

Instance Instance::with_universal_priority(std::vector<Student> students,
                                           std::vector<std::uint32_t> quotas,
                                           const PriorityOrder& priority) {
  Instance inst;
  inst.students = std::move(students);
  inst.schools.reserve(quotas.size());
  for (auto q : quotas) inst.schools.push_back(School{q, priority});
  inst.universal_priority = true;
  return inst;
}

std::uint32_t ReservationQuotas::general(const Instance& inst,
                                         SchoolId c) const {
  const auto q = inst.schools[c].quota;
  if (reserved_[c] > q) {
    throw InputError("school " + std::to_string(c) + ": reserve " +
                     std::to_string(reserved_[c]) + " exceeds quota " +
                     std::to_string(q));
  }
  return q - reserved_[c];
}

Matching::Matching(std::vector<std::optional<SchoolId>> assignment,
                   std::size_t num_schools)
    : assignment_(std::move(assignment)), by_school_(num_schools) {
  for (StudentId s = 0; s < assignment_.size(); ++s) {
    if (!assignment_[s]) continue;
    if (*assignment_[s] >= num_schools) {
      throw InvariantError("student " + std::to_string(s) +
                           " assigned to unknown school " +
                           std::to_string(*assignment_[s]));
    }
    by_school_[*assignment_[s]].push_back(s);
  }
}

Matching Matching::empty(std::size_t num_students, std::size_t num_schools) {
  return Matching(std::vector<std::optional<SchoolId>>(num_students),
                  num_schools);
}

std::size_t Matching::num_matched() const {
  return static_cast<std::size_t>(
      std::count_if(assignment_.begin(), assignment_.end(),
                    [](const auto& a) { return a.has_value(); }));
}

namespace {

std::string student_name(StudentId s) { return "student " + std::to_string(s); }
std::string school_name(SchoolId c) { return "school " + std::to_string(c); }

}  // namespace

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  const auto n = inst.num_students();
  const auto m = inst.num_schools();
  for (StudentId s = 0; s < n; ++s) {
    std::vector<bool> seen(m, false);
    for (SchoolId c : inst.students[s].preferences) {
      if (c >= m) {
        out.push_back({Violation::Kind::kUnknownSchool,
                       student_name(s) + " lists unknown " + school_name(c)});
        continue;
      }
      if (seen[c]) {
        out.push_back({Violation::Kind::kDuplicatePreference,
                       student_name(s) + " lists " + school_name(c) +
                           " more than once"});
      }
      seen[c] = true;
    }
  }
  for (SchoolId c = 0; c < m; ++c) {
    const auto& pr = inst.schools[c].priority;
    bool ok = pr.size() == n;
    if (ok) {
      std::vector<bool> seen(n, false);
      for (StudentId s : pr.order()) {
        if (s >= n || seen[s]) {
          ok = false;
          break;
        }
        seen[s] = true;
      }
    }
    if (!ok) {
      out.push_back({Violation::Kind::kBadPriority,
                     school_name(c) + " priority is not a permutation of all " +
                         std::to_string(n) + " students"});
    } else if (inst.universal_priority && c > 0 &&
               !(pr == inst.schools[0].priority)) {
      out.push_back({Violation::Kind::kNonUniversalPriority,
                     school_name(c) +
                         " priority differs from school 0 under a universal "
                         "priority flag"});
    }
  }
  return out;
}

std::vector<Violation> validate_instance(const Instance& inst,
                                         const ReservationQuotas& quotas) {
  auto out = validate_instance(inst);
  if (quotas.size() != inst.num_schools()) {
    out.push_back({Violation::Kind::kQuotaSizeMismatch,
                   "reservation quotas cover " + std::to_string(quotas.size()) +
                       " schools, instance has " +
                       std::to_string(inst.num_schools())});
    return out;
  }
  for (SchoolId c = 0; c < inst.num_schools(); ++c) {
    if (quotas.reserved(c) > inst.schools[c].quota) {
      out.push_back({Violation::Kind::kReserveExceedsQuota,
                     school_name(c) + " reserves " +
                         std::to_string(quotas.reserved(c)) +
                         " seats but has quota " +
                         std::to_string(inst.schools[c].quota)});
    }
  }
  return out;
}

std::vector<Violation> validate_matching(const Instance& inst,
                                         const Matching& m) {
  std::vector<Violation> out;
  if (m.num_students() != inst.num_students() ||
      m.num_schools() != inst.num_schools()) {
    out.push_back({Violation::Kind::kSizeMismatch,
                   "matching dimensions do not match the instance"});
    return out;
  }
  for (SchoolId c = 0; c < inst.num_schools(); ++c) {
    if (m.students_at(c).size() > inst.schools[c].quota) {
      out.push_back({Violation::Kind::kOverCapacity,
                     school_name(c) + " holds " +
                         std::to_string(m.students_at(c).size()) +
                         " students over quota " +
                         std::to_string(inst.schools[c].quota)});
    }
  }
  for (StudentId s = 0; s < inst.num_students(); ++s) {
    const auto& c = m.school_of(s);
    if (c && !inst.acceptable(s, *c)) {
      out.push_back({Violation::Kind::kUnacceptableAssignment,
                     student_name(s) + " assigned to unlisted " +
                         school_name(*c)});
    }
  }
  return out;
}

Rank rank_in_preferences(const Instance& inst, StudentId s,
                         std::optional<SchoolId> school) {
  if (s >= inst.num_students()) {
    throw std::out_of_range(student_name(s) + " does not exist");
  }
  if (!school) return Rank::unmatched();
  const auto& prefs = inst.students[s].preferences;
  const auto it = std::find(prefs.begin(), prefs.end(), *school);
  if (it == prefs.end()) {
    throw InvariantError(school_name(*school) + " is not on the list of " +
                         student_name(s));
  }
  return Rank(static_cast<std::uint32_t>(it - prefs.begin()) + 1);
}

bool student_prefers(const Instance& inst, StudentId s,
                     std::optional<SchoolId> a, std::optional<SchoolId> b) {
  return rank_in_preferences(inst, s, a) < rank_in_preferences(inst, s, b);
}

}  // namespace reserve
