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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "reserve/golden.h"
#include "reserve/sda.h"
#include "support.h"

namespace reserve {
namespace {

using testing::position;

// Brute force: the DA outcome is stable and every student weakly prefers it
// to every other stable matching.
void check_student_optimal(const Instance& inst, const ReservationQuotas& q,
                           Mechanism mech) {
  const auto da = run_mechanism(mech, inst, q).matching;
  const testing::ChoiceOracle oracle = [&](SchoolId c,
                                           std::vector<StudentId> pool) {
    const auto reserved = mech == Mechanism::kBase ? 0u : q.reserved(c);
    return testing::oracle_choose(mech, inst, c, reserved, std::move(pool));
  };
  CHECK(testing::oracle_stable(inst, da.assignment(), oracle));
  std::size_t stable = 0;
  testing::for_each_matching(inst, [&](const auto& a) {
    if (!testing::oracle_stable(inst, a, oracle)) return;
    ++stable;
    for (StudentId s = 0; s < inst.num_students(); ++s) {
      CHECK(position(inst, s, da.school_of(s)) <= position(inst, s, a[s]));
    }
  });
  CHECK(stable >= 1);
}

TEST_CASE("DA is stable and student-optimal against brute force") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 400; ++trial) {
    auto market = testing::random_market(rng, {4, 3, 2, trial % 2 == 0, true});
    for (auto mech : {Mechanism::kBase, Mechanism::kMr, Mechanism::kJsa}) {
      check_student_optimal(market.instance, market.quotas, mech);
    }
  }
}

TEST_CASE("sequential and round-based DA agree under any proposal order") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    auto market = testing::random_market(rng, {9, 4, 3, trial % 3 == 0, true});
    const auto& inst = market.instance;
    const auto profile = ChoiceProfile::build(Mechanism::kBase, inst, {});
    const auto rounds = sda_rounds(inst, profile);
    CHECK(sda_sequential(inst, profile, lowest_id_first()) == rounds);
    CHECK(sda_sequential(inst, profile, random_order(trial)) == rounds);
  }
}

TEST_CASE("sequential DA refuses non-responsive profiles") {
  const auto& ex = golden_example("mr_jsa_incomparable");
  const auto profile =
      ChoiceProfile::build(Mechanism::kMr, ex.instance, ex.quotas);
  CHECK_FALSE(profile.is_responsive());
  CHECK_THROWS_AS(sda_sequential(ex.instance, profile, lowest_id_first()),
                  std::invalid_argument);
}

TEST_CASE("profiles reject DISC and mismatched sizes") {
  const auto& ex = golden_example("discovery_hurts_all");
  CHECK_THROWS_AS(
      ChoiceProfile::build(Mechanism::kDisc, ex.instance, ex.quotas),
      std::invalid_argument);
  CHECK_THROWS_AS(ChoiceProfile::build(Mechanism::kMr, ex.instance,
                                       ReservationQuotas({1})),
                  InputError);
  const std::vector<std::uint32_t> caps = {1};
  CHECK_THROWS_AS(ChoiceProfile::responsive(ex.instance, caps),
                  std::invalid_argument);
}

TEST_CASE("trace records every application round") {
  const auto& ex = golden_example("discovery_blocking_pair");
  const auto run = run_mechanism(Mechanism::kBase, ex.instance, ex.quotas, true);
  REQUIRE(run.trace.size() == 2);
  CHECK(run.trace[0].applications.size() == 6);
  CHECK(run.trace[0].rejections.size() == 3);
  CHECK(run.trace[1].applications.size() == 3);
  CHECK(run.trace[1].rejections.size() == 1);
  CHECK(run_mechanism(Mechanism::kBase, ex.instance, ex.quotas).trace.empty());
}

TEST_CASE("participant mask keeps others out") {
  const auto& ex = golden_example("discovery_hurts_all");
  std::vector<bool> mask = {false, true, true};
  const auto m = sda_rounds(
      ex.instance, ChoiceProfile::build(Mechanism::kBase, ex.instance, {}),
      SdaOptions{mask, nullptr});
  CHECK_FALSE(m.school_of(0));
  CHECK(m.school_of(1) == SchoolId{0});
  CHECK(m.school_of(2) == SchoolId{1});
  CHECK_THROWS_AS(
      sda_rounds(ex.instance,
                 ChoiceProfile::build(Mechanism::kBase, ex.instance, {}),
                 SdaOptions{{true}, nullptr}),
      std::invalid_argument);
}

TEST_CASE("discovery stages respect their seat budgets") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    auto market = testing::random_market(rng, {8, 4, 3, true, true});
    const auto& inst = market.instance;
    const auto run = run_disc(inst, market.quotas);
    REQUIRE(run.stages);
    const auto& st = *run.stages;
    CHECK(validate_matching(inst, run.matching).empty());
    for (SchoolId c = 0; c < inst.num_schools(); ++c) {
      CHECK(st.general.students_at(c).size() <= market.quotas.general(inst, c));
      CHECK(st.reserved.students_at(c).size() <= market.quotas.reserved(c));
      CHECK(st.dereserved.students_at(c).size() <= st.leftover[c]);
      CHECK(st.leftover[c] + st.reserved.students_at(c).size() ==
            market.quotas.reserved(c));
    }
    for (StudentId s = 0; s < inst.num_students(); ++s) {
      if (st.reserved.school_of(s)) {
        CHECK(inst.is_disadvantaged(s));
        CHECK_FALSE(st.general.school_of(s));
      }
      if (st.dereserved.school_of(s)) {
        CHECK_FALSE(inst.is_disadvantaged(s));
        CHECK_FALSE(st.general.school_of(s));
      }
    }
  }
}

TEST_CASE("zero reserves make every mechanism coincide with BASE") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    auto market = testing::random_market(rng, {8, 4, 3, true, true});
    const auto zeros = ReservationQuotas::zeros(market.instance.num_schools());
    const auto base =
        run_mechanism(Mechanism::kBase, market.instance, zeros).matching;
    for (auto mech : {Mechanism::kDisc, Mechanism::kMr, Mechanism::kJsa}) {
      CHECK(run_mechanism(mech, market.instance, zeros).matching == base);
    }
  }
}

}  // namespace
}  // namespace reserve
