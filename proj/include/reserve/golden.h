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

// Small hand-checked markets with known outcomes, used by `selftest` and the
// test suites. Student labels sM<k> are advantaged, sm<k> disadvantaged.

#ifndef RESERVE_GOLDEN_H_
#define RESERVE_GOLDEN_H_

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reserve/choice.h"
#include "reserve/io.h"
#include "reserve/model.h"

namespace reserve {

struct GoldenExample {
  std::string name;
  std::string description;
  std::vector<std::string> students;
  std::vector<std::string> schools;
  Instance instance;
  ReservationQuotas quotas;
  std::map<Mechanism, Matching> expected;
  // Disadvantaged in-group blocking pairs expected under DISC, as (s, c).
  std::vector<std::pair<StudentId, SchoolId>> disc_blocking_pairs;

  StudentId student(std::string_view label) const;
  SchoolId school(std::string_view label) const;
};

// discovery_hurts_all, discovery_blocking_pair, mr_jsa_incomparable,
// reserve_below_baseline, reserves_help_all, discovery_incomparable.
const std::vector<GoldenExample>& golden_examples();

// Throws std::out_of_range for an unknown name.
const GoldenExample& golden_example(std::string_view name);

struct GoldenCheck {
  std::string example;
  std::string what;  // mechanism name or "disc blocking pairs"
  bool ok = false;
  std::string detail;
};

std::vector<GoldenCheck> verify_golden(const GoldenExample& example);

// The example as a loadable market: labels become ids and codes, and scores
// descend along the priority order.
Market golden_market(const GoldenExample& example);

}  // namespace reserve

#endif  // RESERVE_GOLDEN_H_
