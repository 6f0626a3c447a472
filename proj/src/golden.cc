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

#include "reserve/golden.h"

#include <algorithm>
#include <stdexcept>

#include "reserve/audit.h"
#include "reserve/sda.h"

namespace reserve {

namespace {

using Pairs = std::vector<std::pair<std::string, std::string>>;

struct Spec {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, std::vector<std::string>>> students;
  std::vector<std::string> priority;
  std::vector<std::pair<std::string, std::uint32_t>> schools;  // label, q
  std::vector<std::uint32_t> reserved;
  std::vector<std::pair<Mechanism, Pairs>> expected;
  Pairs disc_blocking_pairs;
};

std::size_t index_of(const std::vector<std::string>& labels,
                     std::string_view label) {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw std::out_of_range("unknown label '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

GoldenExample build(const Spec& spec) {
  GoldenExample ex;
  ex.name = spec.name;
  ex.description = spec.description;
  for (const auto& [label, q] : spec.schools) ex.schools.push_back(label);
  for (const auto& [label, prefs] : spec.students) ex.students.push_back(label);

  std::vector<Student> students;
  for (const auto& [label, prefs] : spec.students) {
    Student st;
    st.group = label.rfind("sm", 0) == 0 ? Group::Disadvantaged
                                         : Group::Advantaged;
    for (const auto& c : prefs) {
      st.preferences.push_back(static_cast<SchoolId>(ex.school(c)));
    }
    students.push_back(std::move(st));
  }
  std::vector<StudentId> order;
  for (const auto& label : spec.priority) order.push_back(ex.student(label));
  std::vector<std::uint32_t> quotas;
  for (const auto& [label, q] : spec.schools) quotas.push_back(q);
  ex.instance = Instance::with_universal_priority(
      std::move(students), std::move(quotas),
      PriorityOrder::from_order(std::move(order)));
  ex.quotas = ReservationQuotas(spec.reserved);

  for (const auto& [mech, pairs] : spec.expected) {
    std::vector<std::optional<SchoolId>> assignment(ex.students.size());
    for (const auto& [s, c] : pairs) assignment[ex.student(s)] = ex.school(c);
    ex.expected.emplace(mech, Matching(std::move(assignment), ex.schools.size()));
  }
  for (const auto& [s, c] : spec.disc_blocking_pairs) {
    ex.disc_blocking_pairs.emplace_back(ex.student(s), ex.school(c));
  }
  return ex;
}

std::vector<GoldenExample> make_examples() {
  const auto kBase = Mechanism::kBase;
  const auto kDisc = Mechanism::kDisc;
  const auto kMr = Mechanism::kMr;
  const auto kJsa = Mechanism::kJsa;
  std::vector<Spec> specs;

  specs.push_back(Spec{
      "discovery_hurts_all",
      "DISC leaves the only disadvantaged student worse off than BASE",
      {{"sM1", {"c1", "c2"}}, {"sM2", {"c1", "c2"}}, {"sm1", {"c2", "c1"}}},
      {"sM1", "sM2", "sm1"},
      {{"c1", 2}, {"c2", 1}},
      {1, 0},
      {{kBase, {{"sM1", "c1"}, {"sM2", "c1"}, {"sm1", "c2"}}},
       {kDisc, {{"sM1", "c1"}, {"sM2", "c2"}, {"sm1", "c1"}}}},
      {}});

  const std::vector<std::string> both = {"c1", "c2"};
  specs.push_back(Spec{
      "discovery_blocking_pair",
      "DISC under a smart reserve hurts sm1 and creates the blocking pair "
      "(sm1, c1)",
      {{"sM1", both}, {"sM2", both}, {"sM3", both},
       {"sm1", both}, {"sm2", both}, {"sm3", both}},
      {"sM1", "sM2", "sm1", "sM3", "sm2", "sm3"},
      {{"c1", 3}, {"c2", 2}},
      {1, 1},
      {{kBase,
        {{"sM1", "c1"}, {"sM2", "c1"}, {"sm1", "c1"}, {"sM3", "c2"},
         {"sm2", "c2"}}},
       {kDisc,
        {{"sM1", "c1"}, {"sM2", "c1"}, {"sm2", "c1"}, {"sm1", "c2"},
         {"sm3", "c2"}}}},
      {{"sm1", "c1"}}});

  specs.push_back(Spec{
      "mr_jsa_incomparable",
      "MR and JSA are incomparable for disadvantaged students",
      {{"sM1", {"c2"}},
       {"sM2", {"c1", "c3"}},
       {"sM3", {"c4", "c3"}},
       {"sm1", {"c2", "c1"}},
       {"sm2", {"c4"}},
       {"sm3", {"c3"}},
       {"sm4", {"c4"}}},
      {"sM1", "sm1", "sM2", "sm2", "sM3", "sm3", "sm4"},
      {{"c1", 1}, {"c2", 1}, {"c3", 1}, {"c4", 2}},
      {0, 1, 0, 1},
      {{kBase,
        {{"sm1", "c1"}, {"sM1", "c2"}, {"sM2", "c3"}, {"sm2", "c4"},
         {"sM3", "c4"}}},
       {kMr,
        {{"sM2", "c1"}, {"sm1", "c2"}, {"sm3", "c3"}, {"sm2", "c4"},
         {"sM3", "c4"}}},
       {kJsa,
        {{"sM2", "c1"}, {"sm1", "c2"}, {"sM3", "c3"}, {"sm2", "c4"},
         {"sm4", "c4"}}}},
      {}});

  specs.push_back(Spec{
      "reserve_below_baseline",
      "BASE Pareto dominates MR and JSA for disadvantaged students",
      {{"sM1", {"c1", "c3"}}, {"sm1", {"c3", "c1"}}, {"sm2", {"c1", "c2"}}},
      {"sM1", "sm1", "sm2"},
      {{"c1", 1}, {"c2", 1}, {"c3", 1}},
      {1, 0, 0},
      {{kBase, {{"sM1", "c1"}, {"sm2", "c2"}, {"sm1", "c3"}}},
       {kMr, {{"sm1", "c1"}, {"sm2", "c2"}, {"sM1", "c3"}}},
       {kJsa, {{"sm1", "c1"}, {"sm2", "c2"}, {"sM1", "c3"}}}},
      {}});

  specs.push_back(Spec{
      "reserves_help_all",
      "every reserve mechanism Pareto dominates BASE for disadvantaged "
      "students",
      {{"sM1", both}, {"sm1", both}, {"sm2", both}},
      {"sM1", "sm1", "sm2"},
      {{"c1", 1}, {"c2", 1}},
      {1, 1},
      {{kBase, {{"sM1", "c1"}, {"sm1", "c2"}}},
       {kMr, {{"sm1", "c1"}, {"sm2", "c2"}}},
       {kDisc, {{"sm1", "c1"}, {"sm2", "c2"}}},
       {kJsa, {{"sm1", "c1"}, {"sm2", "c2"}}}},
      {}});

  const Pairs stable = {
      {"sM1", "c1"}, {"sm1", "c1"}, {"sM2", "c2"}, {"sm2", "c2"}};
  specs.push_back(Spec{
      "discovery_incomparable",
      "DISC is incomparable with BASE, MR and JSA under a smart reserve",
      {{"sM1", both}, {"sM2", both}, {"sm1", both}, {"sm2", both}},
      {"sM1", "sm1", "sM2", "sm2"},
      {{"c1", 2}, {"c2", 2}},
      {1, 1},
      {{kBase, stable},
       {kMr, stable},
       {kJsa, stable},
       {kDisc, {{"sM1", "c1"}, {"sm2", "c1"}, {"sm1", "c2"}, {"sM2", "c2"}}}},
      {}});

  std::vector<GoldenExample> out;
  for (const auto& spec : specs) out.push_back(build(spec));
  return out;
}

}  // namespace

StudentId GoldenExample::student(std::string_view label) const {
  return static_cast<StudentId>(index_of(students, label));
}

SchoolId GoldenExample::school(std::string_view label) const {
  return static_cast<SchoolId>(index_of(schools, label));
}

const std::vector<GoldenExample>& golden_examples() {
  static const std::vector<GoldenExample> examples = make_examples();
  return examples;
}

const GoldenExample& golden_example(std::string_view name) {
  for (const auto& ex : golden_examples()) {
    if (ex.name == name) return ex;
  }
  throw std::out_of_range("no golden example named '" + std::string(name) +
                          "'");
}

std::vector<GoldenCheck> verify_golden(const GoldenExample& ex) {
  std::vector<GoldenCheck> out;
  for (const auto& [mech, expected] : ex.expected) {
    const auto got = run_mechanism(mech, ex.instance, ex.quotas).matching;
    GoldenCheck check{ex.name, std::string(to_string(mech)), true, {}};
    for (StudentId s = 0; s < ex.students.size(); ++s) {
      if (got.school_of(s) == expected.school_of(s)) continue;
      check.ok = false;
      const auto name = [&](const std::optional<SchoolId>& c) {
        return c ? ex.schools[*c] : std::string("-");
      };
      check.detail += ex.students[s] + ": got " + name(got.school_of(s)) +
                      ", want " + name(expected.school_of(s)) + "; ";
    }
    out.push_back(std::move(check));
  }
  if (!ex.disc_blocking_pairs.empty()) {
    const auto disc =
        run_mechanism(Mechanism::kDisc, ex.instance, ex.quotas).matching;
    const auto pairs =
        find_in_group_blocking_pairs(ex.instance, disc, Group::Disadvantaged);
    std::vector<std::pair<StudentId, SchoolId>> got;
    for (const auto& p : pairs) got.emplace_back(p.student, p.school);
    GoldenCheck check{ex.name, "disc blocking pairs",
                      got == ex.disc_blocking_pairs, {}};
    if (!check.ok) {
      check.detail = "found " + std::to_string(got.size()) + " pair(s)";
    }
    out.push_back(std::move(check));
  }
  return out;
}

Market golden_market(const GoldenExample& ex) {
  std::vector<SchoolRecord> schools;
  for (SchoolId c = 0; c < ex.schools.size(); ++c) {
    schools.push_back({ex.schools[c], "School " + ex.schools[c],
                       ex.instance.schools[c].quota});
  }
  const auto& priority = ex.instance.schools.front().priority;
  std::vector<StudentRecord> students;
  for (StudentId s = 0; s < ex.students.size(); ++s) {
    StudentRecord r;
    r.id = ex.students[s];
    r.score = static_cast<double>(100 - priority.rank(s));
    r.disadvantaged = ex.instance.is_disadvantaged(s);
    r.preferences = ex.instance.students[s].preferences;
    students.push_back(std::move(r));
  }
  return build_market(SchoolTable(std::move(schools)), std::move(students), 0);
}

}  // namespace reserve
