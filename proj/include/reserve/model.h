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

// Domain types for school-choice markets with reserved seats: students with
// group labels and preference lists, schools with quotas and priority orders,
// reservation quotas, and matchings.

#ifndef RESERVE_MODEL_H_
#define RESERVE_MODEL_H_

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reserve {

// Dense indices into an instance's student / school arrays.
using StudentId = std::uint32_t;
using SchoolId = std::uint32_t;

enum class Group : std::uint8_t { Advantaged, Disadvantaged };

std::string_view to_string(Group g);

// Malformed input (bad file, bad quota, unknown school). CLI exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A broken internal invariant, including theorem-violation assertions.
// CLI exit code 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Strict total order over all students. rank(s) == 0 is the highest priority.
class PriorityOrder {
 public:
  PriorityOrder() = default;

  // `order` lists students from highest to lowest priority; it must be a
  // permutation of 0..order.size()-1.
  static PriorityOrder from_order(std::vector<StudentId> order);
  static PriorityOrder identity(std::size_t n);

  std::uint32_t rank(StudentId s) const { return rank_[s]; }
  // True iff a has strictly higher priority than b.
  bool prefers(StudentId a, StudentId b) const { return rank_[a] < rank_[b]; }
  const std::vector<StudentId>& order() const { return order_; }
  std::size_t size() const { return order_.size(); }

  // Copy where s trades places with its neighbour directly above
  // (direction < 0) or directly below (direction > 0). Returns nullopt when
  // no such neighbour exists.
  std::optional<PriorityOrder> with_swap(StudentId s, int direction) const;

  friend bool operator==(const PriorityOrder& a, const PriorityOrder& b) {
    return a.order_ == b.order_;
  }

 private:
  std::vector<std::uint32_t> rank_;
  std::vector<StudentId> order_;
};

struct Student {
  Group group = Group::Advantaged;
  // Most preferred first; schools absent from the list are unacceptable.
  std::vector<SchoolId> preferences;
};

struct School {
  std::uint32_t quota = 0;
  PriorityOrder priority;
};

struct Instance {
  std::vector<Student> students;
  std::vector<School> schools;
  // When set, every school carries the same PriorityOrder.
  bool universal_priority = false;

  std::size_t num_students() const { return students.size(); }
  std::size_t num_schools() const { return schools.size(); }
  Group group(StudentId s) const { return students[s].group; }
  bool is_disadvantaged(StudentId s) const {
    return students[s].group == Group::Disadvantaged;
  }
  std::vector<Group> groups() const;
  std::size_t count(Group g) const;
  bool acceptable(StudentId s, SchoolId c) const;

  // Builds an instance where every school shares `priority`.
  static Instance with_universal_priority(std::vector<Student> students,
                                          std::vector<std::uint32_t> quotas,
                                          const PriorityOrder& priority);
};

// Seats reserved for disadvantaged students at each school. General seats
// q_c - q_c^R are derived on demand and never stored.
class ReservationQuotas {
 public:
  ReservationQuotas() = default;
  explicit ReservationQuotas(std::vector<std::uint32_t> reserved)
      : reserved_(std::move(reserved)) {}

  static ReservationQuotas zeros(std::size_t num_schools) {
    return ReservationQuotas(std::vector<std::uint32_t>(num_schools, 0));
  }

  std::uint32_t reserved(SchoolId c) const { return reserved_[c]; }
  // Throws InputError if the reserve exceeds the school's quota.
  std::uint32_t general(const Instance& inst, SchoolId c) const;
  std::size_t size() const { return reserved_.size(); }
  const std::vector<std::uint32_t>& values() const { return reserved_; }

  friend bool operator==(const ReservationQuotas&,
                         const ReservationQuotas&) = default;

 private:
  std::vector<std::uint32_t> reserved_;
};

// Position of a school in a preference list, 1-based. The unmatched sentinel
// compares worse (greater) than every listed school.
class Rank {
 public:
  static constexpr std::uint32_t kUnmatched =
      std::numeric_limits<std::uint32_t>::max();

  constexpr explicit Rank(std::uint32_t v) : value_(v) {}
  static constexpr Rank unmatched() { return Rank(kUnmatched); }

  constexpr bool is_unmatched() const { return value_ == kUnmatched; }
  constexpr std::uint32_t value() const { return value_; }

  friend constexpr auto operator<=>(Rank, Rank) = default;

 private:
  std::uint32_t value_;
};

// Assignment of students to schools plus the inverse school view. Immutable
// once built.
class Matching {
 public:
  Matching() = default;
  Matching(std::vector<std::optional<SchoolId>> assignment,
           std::size_t num_schools);
  static Matching empty(std::size_t num_students, std::size_t num_schools);

  const std::optional<SchoolId>& school_of(StudentId s) const {
    return assignment_[s];
  }
  // Students at c, sorted by id.
  const std::vector<StudentId>& students_at(SchoolId c) const {
    return by_school_[c];
  }
  const std::vector<std::optional<SchoolId>>& assignment() const {
    return assignment_;
  }
  std::size_t num_students() const { return assignment_.size(); }
  std::size_t num_schools() const { return by_school_.size(); }
  std::size_t num_matched() const;

  friend bool operator==(const Matching& a, const Matching& b) {
    return a.assignment_ == b.assignment_ &&
           a.by_school_.size() == b.by_school_.size();
  }

 private:
  std::vector<std::optional<SchoolId>> assignment_;
  std::vector<std::vector<StudentId>> by_school_;
};

struct Violation {
  enum class Kind {
    kEmptyInstance,
    kUnknownSchool,
    kDuplicatePreference,
    kBadPriority,
    kNonUniversalPriority,
    kReserveExceedsQuota,
    kQuotaSizeMismatch,
    kOverCapacity,
    kUnacceptableAssignment,
    kSizeMismatch,
  };
  Kind kind;
  std::string message;
};

// Empty iff every structural invariant holds. Violations name the offending
// student or school.
std::vector<Violation> validate_instance(const Instance& inst);
std::vector<Violation> validate_instance(const Instance& inst,
                                         const ReservationQuotas& quotas);
std::vector<Violation> validate_matching(const Instance& inst,
                                         const Matching& m);

// 1-based position of `school` in s's list, or the unmatched sentinel when
// `school` is empty. Throws std::out_of_range for an unknown student and
// InvariantError if the school is not on s's list.
Rank rank_in_preferences(const Instance& inst, StudentId s,
                         std::optional<SchoolId> school);

// True iff s strictly prefers a to b (either may be unmatched).
bool student_prefers(const Instance& inst, StudentId s,
                     std::optional<SchoolId> a, std::optional<SchoolId> b);

}  // namespace reserve

#endif  // RESERVE_MODEL_H_
