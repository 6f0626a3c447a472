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
#include "reserve/choice.h"
#include "support.h"

namespace reserve {
namespace {

using testing::oracle_choose;

// Six students, priority by id, odd ids disadvantaged.
struct Fixture {
  std::vector<Group> groups;
  PriorityOrder priority = PriorityOrder::identity(6);
  Fixture() {
    for (int s = 0; s < 6; ++s) {
      groups.push_back(s % 2 ? Group::Disadvantaged : Group::Advantaged);
    }
  }
};

std::vector<StudentId> universe(std::size_t n) {
  std::vector<StudentId> u(n);
  std::iota(u.begin(), u.end(), StudentId{0});
  return u;
}

TEST_CASE("mechanism names round trip") {
  for (auto m : {Mechanism::kBase, Mechanism::kDisc, Mechanism::kMr,
                 Mechanism::kJsa}) {
    CHECK(parse_mechanism(to_string(m)) == m);
  }
  CHECK(parse_mechanism("JSA") == Mechanism::kJsa);
  CHECK_THROWS_AS(parse_mechanism("lottery"), InputError);
}

TEST_CASE("max_select keeps the k best by priority") {
  const auto p = PriorityOrder::from_order({3, 1, 0, 2});
  const std::vector<StudentId> pool = {0, 1, 2, 3};
  CHECK(max_select(pool, p, 2) == StudentSet{1, 3});
  CHECK(max_select(pool, p, 9) == StudentSet{0, 1, 2, 3});
  CHECK(max_select(pool, p, 0).empty());
}

TEST_CASE("minority reserve fills reserved seats first") {
  Fixture f;
  const ChoiceContext mr(Mechanism::kMr, f.priority, 3, 2, f.groups);
  // Reserved: 1, 3. Remaining one seat: 0.
  CHECK(choose(mr, universe(6)) == StudentSet{0, 1, 3});
  const auto passes = choose_with_passes(mr, universe(6));
  CHECK(passes.chosen == StudentSet{0, 1, 3});
  CHECK(passes.pass_of == std::vector<std::uint8_t>{1, 0, 0});
}

TEST_CASE("joint seat allocation fills general seats first") {
  Fixture f;
  const ChoiceContext jsa(Mechanism::kJsa, f.priority, 3, 2, f.groups);
  // General: 0. Reserved among the rest: 1, 3.
  CHECK(choose(jsa, universe(6)) == StudentSet{0, 1, 3});
  const ChoiceContext jsa1(Mechanism::kJsa, f.priority, 3, 1, f.groups);
  // General: 0, 1. Reserved: 3.
  CHECK(choose(jsa1, universe(6)) == StudentSet{0, 1, 3});
  // No disadvantaged applicants: reserved seats revert.
  CHECK(choose(jsa, std::vector<StudentId>{0, 2, 4}) == StudentSet{0, 2, 4});
}

TEST_CASE("context construction rules") {
  Fixture f;
  CHECK_THROWS_AS(ChoiceContext(Mechanism::kDisc, f.priority, 2, 1, f.groups),
                  std::invalid_argument);
  CHECK_THROWS(ChoiceContext(Mechanism::kMr, f.priority, 2, 3, f.groups));
  const ChoiceContext base(Mechanism::kBase, f.priority, 2, 1, f.groups);
  CHECK(base.reserved() == 0);
  CHECK(base.is_responsive());
  CHECK(ChoiceContext(Mechanism::kMr, f.priority, 2, 0, f.groups)
            .is_responsive());
  CHECK_FALSE(ChoiceContext(Mechanism::kMr, f.priority, 2, 1, f.groups)
                  .is_responsive());
}

TEST_CASE("choose agrees with the set-formula oracle on random pools") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    auto market = testing::random_market(rng, {10, 2, 5, false, true});
    const auto& inst = market.instance;
    const auto groups = inst.groups();
    for (SchoolId c = 0; c < inst.num_schools(); ++c) {
      std::vector<StudentId> pool;
      for (StudentId s = 0; s < inst.num_students(); ++s) {
        if (rng() % 2) pool.push_back(s);
      }
      for (auto mech : {Mechanism::kBase, Mechanism::kMr, Mechanism::kJsa}) {
        const auto reserved =
            mech == Mechanism::kBase ? 0 : market.quotas.reserved(c);
        const ChoiceContext ctx(mech, inst.schools[c].priority,
                                inst.schools[c].quota, reserved, groups);
        CHECK(choose(ctx, pool) ==
              oracle_choose(mech, inst, c, reserved, pool));
      }
    }
  }
}

TEST_CASE("axioms hold exhaustively for the three rules") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Group> groups;
    for (int s = 0; s < 8; ++s) {
      groups.push_back(rng() % 2 ? Group::Disadvantaged : Group::Advantaged);
    }
    const auto pr = testing::random_priority(8, rng);
    const std::uint32_t q = 1 + rng() % 4;
    const std::uint32_t r = rng() % (q + 1);
    for (auto mech : {Mechanism::kBase, Mechanism::kMr, Mechanism::kJsa}) {
      const ChoiceContext ctx(mech, pr, q, r, groups);
      const auto u = universe(8);
      CHECK_FALSE(check_substitutable(ctx, u, 0, 0));
      CHECK_FALSE(check_consistent(ctx, u, 0, 0));
      CHECK_FALSE(check_q_acceptant(ctx, u, 0, 0));
    }
  }
}

TEST_CASE("sampled mode covers universes above the exhaustive limit") {
  std::mt19937_64 rng(9);
  std::vector<Group> groups;
  for (int s = 0; s < 40; ++s) {
    groups.push_back(rng() % 3 ? Group::Advantaged : Group::Disadvantaged);
  }
  const auto pr = testing::random_priority(40, rng);
  const ChoiceContext jsa(Mechanism::kJsa, pr, 7, 3, groups);
  const auto u = universe(40);
  CHECK_FALSE(check_substitutable(jsa, u, 3000, 1));
  CHECK_FALSE(check_consistent(jsa, u, 3000, 2));
  CHECK_FALSE(check_q_acceptant(jsa, u, 3000, 3));
}

TEST_CASE("checkers catch deliberately broken rules") {
  // Complements: 0 is only taken together with 1.
  const ChoiceRule complements = [](std::span<const StudentId> pool) {
    const bool has0 = std::find(pool.begin(), pool.end(), 0) != pool.end();
    const bool has1 = std::find(pool.begin(), pool.end(), 1) != pool.end();
    return has0 && has1 ? StudentSet{0, 1} : StudentSet{};
  };
  const auto u = universe(4);
  const auto sub = check_substitutable(complements, u, 0, 0);
  REQUIRE(sub);
  CHECK((sub->student == 0 || sub->student == 1));

  // Picks the highest id, but only from pools of two or more.
  const ChoiceRule fickle = [](std::span<const StudentId> pool) {
    if (pool.size() < 2) return StudentSet{};
    return StudentSet{*std::max_element(pool.begin(), pool.end())};
  };
  CHECK(check_consistent(fickle, u, 0, 0));

  // Keeps the lowest-priority student only: consistent and substitutable,
  // but never fills two seats.
  const ChoiceRule worst_one = [](std::span<const StudentId> pool) {
    if (pool.empty()) return StudentSet{};
    return StudentSet{*std::max_element(pool.begin(), pool.end())};
  };
  CHECK_FALSE(check_substitutable(worst_one, u, 0, 0));
  CHECK_FALSE(check_consistent(worst_one, u, 0, 0));
  CHECK(check_q_acceptant(worst_one, 2, u, 0, 0));
}

}  // namespace
}  // namespace reserve
