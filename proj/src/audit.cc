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

#include "reserve/audit.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace reserve {

std::vector<BlockingPair> find_in_group_blocking_pairs(const Instance& inst,
                                                       const Matching& m,
                                                       Group group) {
  const auto scope = group == Group::Disadvantaged
                         ? BlockingPair::Scope::kDisadvantagedInGroup
                         : BlockingPair::Scope::kAdvantagedInGroup;
  std::vector<BlockingPair> out;
  for (StudentId s = 0; s < inst.num_students(); ++s) {
    if (inst.group(s) != group) continue;
    const auto current = rank_in_preferences(inst, s, m.school_of(s));
    const auto& prefs = inst.students[s].preferences;
    for (std::size_t i = 0; i < prefs.size() && Rank(i + 1) < current; ++i) {
      const SchoolId c = prefs[i];
      const auto& priority = inst.schools[c].priority;
      std::optional<StudentId> witness;
      for (StudentId t : m.students_at(c)) {
        if (inst.group(t) != group || !priority.prefers(s, t)) continue;
        if (!witness || priority.prefers(*witness, t)) witness = t;
      }
      if (witness) out.push_back({s, c, witness, scope});
    }
  }
  return out;
}

std::vector<BlockingPair> find_blocking_pairs(const Instance& inst,
                                              const Matching& m,
                                              const ChoiceProfile& profile) {
  std::vector<BlockingPair> out;
  for (StudentId s = 0; s < inst.num_students(); ++s) {
    const auto current = rank_in_preferences(inst, s, m.school_of(s));
    const auto& prefs = inst.students[s].preferences;
    for (std::size_t i = 0; i < prefs.size() && Rank(i + 1) < current; ++i) {
      const SchoolId c = prefs[i];
      StudentSet pool = m.students_at(c);
      pool.push_back(s);
      const auto chosen = choose(profile.at(c), pool);
      if (!std::binary_search(chosen.begin(), chosen.end(), s)) continue;
      std::optional<StudentId> witness;
      for (StudentId t : m.students_at(c)) {
        if (!std::binary_search(chosen.begin(), chosen.end(), t)) {
          witness = t;
          break;
        }
      }
      out.push_back({s, c, witness, BlockingPair::Scope::kClassical});
    }
  }
  return out;
}

std::size_t affected_students(const std::vector<BlockingPair>& pairs) {
  std::set<StudentId> seen;
  for (const auto& p : pairs) {
    seen.insert(p.student);
    if (p.witness) seen.insert(*p.witness);
  }
  return seen.size();
}

std::string_view to_string(DominanceVerdict::Kind k) {
  switch (k) {
    case DominanceVerdict::Kind::kEqual:
      return "equal";
    case DominanceVerdict::Kind::kParetoDominates:
      return "pareto-dominates";
    case DominanceVerdict::Kind::kParetoDominated:
      return "pareto-dominated";
    case DominanceVerdict::Kind::kIncomparable:
      return "incomparable";
  }
  return "?";
}

DominanceVerdict compare_for_group(const Instance& inst, const Matching& first,
                                   const Matching& second, Group group) {
  DominanceVerdict v;
  for (StudentId s = 0; s < inst.num_students(); ++s) {
    if (inst.group(s) != group) continue;
    const auto a = rank_in_preferences(inst, s, first.school_of(s));
    const auto b = rank_in_preferences(inst, s, second.school_of(s));
    if (a < b) v.prefer_first.push_back(s);
    if (b < a) v.prefer_second.push_back(s);
  }
  using Kind = DominanceVerdict::Kind;
  if (v.prefer_first.empty() && v.prefer_second.empty()) {
    v.kind = Kind::kEqual;
  } else if (v.prefer_second.empty()) {
    v.kind = Kind::kParetoDominates;
  } else if (v.prefer_first.empty()) {
    v.kind = Kind::kParetoDominated;
  } else {
    v.kind = Kind::kIncomparable;
  }
  return v;
}

RankDelta rank_delta(const Instance& inst, StudentId s,
                     const Matching& baseline, const Matching& other) {
  const auto before = rank_in_preferences(inst, s, baseline.school_of(s));
  const auto after = rank_in_preferences(inst, s, other.school_of(s));
  if (before.is_unmatched() && after.is_unmatched()) return RankDelta::numeric(0);
  if (before.is_unmatched()) return RankDelta::gained();
  if (after.is_unmatched()) return RankDelta::lost();
  return RankDelta::numeric(static_cast<std::int32_t>(after.value()) -
                            static_cast<std::int32_t>(before.value()));
}

RankHistogram rank_change_histogram(const Instance& inst,
                                    const Matching& baseline,
                                    const Matching& other, Group group) {
  RankHistogram h;
  for (StudentId s = 0; s < inst.num_students(); ++s) {
    if (inst.group(s) == group) ++h[rank_delta(inst, s, baseline, other)];
  }
  return h;
}

namespace {

std::size_t disadvantaged_at(const Instance& inst, const Matching& m,
                             SchoolId c) {
  const auto& at = m.students_at(c);
  return static_cast<std::size_t>(std::count_if(
      at.begin(), at.end(),
      [&](StudentId s) { return inst.is_disadvantaged(s); }));
}

}  // namespace

HighCompetitiveness check_high_competitiveness(const Instance& inst,
                                               const ReservationQuotas& quotas,
                                               const Matching& mr) {
  HighCompetitiveness hc;
  hc.holds = true;
  hc.slack.resize(inst.num_schools());
  for (SchoolId c = 0; c < inst.num_schools(); ++c) {
    hc.slack[c] = static_cast<std::int64_t>(quotas.reserved(c)) -
                  static_cast<std::int64_t>(disadvantaged_at(inst, mr, c));
    if (hc.slack[c] < 0) hc.holds = false;
  }
  hc.mr = mr;
  return hc;
}

HighCompetitiveness check_high_competitiveness(
    const Instance& inst, const ReservationQuotas& quotas) {
  return check_high_competitiveness(
      inst, quotas, run_mechanism(Mechanism::kMr, inst, quotas).matching);
}

bool check_smart_reserve(const Instance& inst, const ReservationQuotas& quotas,
                         const Matching& base) {
  for (SchoolId c = 0; c < inst.num_schools(); ++c) {
    if (quotas.reserved(c) < disadvantaged_at(inst, base, c)) return false;
  }
  return true;
}

bool check_smart_reserve(const Instance& inst,
                         const ReservationQuotas& quotas) {
  return check_smart_reserve(
      inst, quotas, run_mechanism(Mechanism::kBase, inst, quotas).matching);
}

JsaVersusMr verify_jsa_dominates_mr(const Instance& inst,
                                    const ReservationQuotas& quotas) {
  JsaVersusMr out;
  const auto hc = check_high_competitiveness(inst, quotas);
  const auto jsa = run_mechanism(Mechanism::kJsa, inst, quotas).matching;
  out.highly_competitive = hc.holds;
  out.verdict = compare_for_group(inst, jsa, hc.mr, Group::Disadvantaged);
  out.theorem_violation =
      hc.holds && !out.verdict.first_weakly_dominates();
  return out;
}

namespace {

// Every non-empty ordered selection of distinct schools from `prefs`.
void ordered_sublists(const std::vector<SchoolId>& prefs,
                      std::vector<SchoolId>& current, std::vector<bool>& used,
                      std::vector<std::vector<SchoolId>>& out) {
  if (!current.empty()) out.push_back(current);
  for (std::size_t i = 0; i < prefs.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    current.push_back(prefs[i]);
    ordered_sublists(prefs, current, used, out);
    current.pop_back();
    used[i] = false;
  }
}

std::vector<std::vector<SchoolId>> misreports_for(
    const std::vector<SchoolId>& prefs, std::size_t budget,
    std::mt19937_64& rng) {
  std::vector<std::vector<SchoolId>> out;
  for (std::size_t len = 0; len < prefs.size(); ++len) {
    out.emplace_back(prefs.begin(), prefs.begin() + len);
  }
  if (prefs.size() <= 4) {
    std::vector<SchoolId> current;
    std::vector<bool> used(prefs.size(), false);
    ordered_sublists(prefs, current, used, out);
  } else {
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < budget; ++i) {
      std::vector<SchoolId> pick;
      for (SchoolId c : prefs) {
        if (coin(rng)) pick.push_back(c);
      }
      std::shuffle(pick.begin(), pick.end(), rng);
      out.push_back(std::move(pick));
    }
  }
  return out;
}

std::vector<StudentId> sample_students(std::size_t n, std::size_t budget,
                                       std::mt19937_64& rng) {
  std::vector<StudentId> all(n);
  std::iota(all.begin(), all.end(), StudentId{0});
  if (budget >= n) return all;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(budget);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

std::optional<ManipulationWitness> probe_strategyproofness(
    Mechanism mechanism, const Instance& inst, const ReservationQuotas& quotas,
    std::size_t budget, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto truthful = run_mechanism(mechanism, inst, quotas).matching;
  Instance scratch = inst;
  for (StudentId s = 0; s < inst.num_students(); ++s) {
    const auto& prefs = inst.students[s].preferences;
    for (auto& report : misreports_for(prefs, budget, rng)) {
      scratch.students[s].preferences = report;
      const auto outcome =
          run_mechanism(mechanism, scratch, quotas).matching.school_of(s);
      if (student_prefers(inst, s, outcome, truthful.school_of(s))) {
        return ManipulationWitness{s, std::move(report), truthful.school_of(s),
                                   outcome};
      }
    }
    scratch.students[s].preferences = prefs;
  }
  return std::nullopt;
}

std::optional<ImprovementWitness> probe_respect_improvements(
    Mechanism mechanism, const Instance& inst, const ReservationQuotas& quotas,
    std::size_t budget, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto reported = run_mechanism(mechanism, inst, quotas).matching;
  Instance scratch = inst;

  // Applies a one-step swap of s at the given schools, runs the mechanism,
  // and restores the priorities. nullopt when s has no neighbour there.
  const auto outcome_after_swap =
      [&](StudentId s, int direction,
          const std::vector<SchoolId>& schools)
      -> std::optional<std::optional<SchoolId>> {
    bool changed = false;
    for (SchoolId c : schools) {
      if (auto swapped = inst.schools[c].priority.with_swap(s, direction)) {
        scratch.schools[c].priority = std::move(*swapped);
        changed = true;
      }
    }
    std::optional<std::optional<SchoolId>> result;
    if (changed) {
      result = run_mechanism(mechanism, scratch, quotas).matching.school_of(s);
    }
    for (SchoolId c : schools) scratch.schools[c].priority = inst.schools[c].priority;
    return result;
  };

  std::vector<std::vector<SchoolId>> school_groups;
  if (inst.universal_priority) {
    std::vector<SchoolId> all(inst.num_schools());
    std::iota(all.begin(), all.end(), SchoolId{0});
    school_groups.push_back(std::move(all));
  } else {
    for (SchoolId c = 0; c < inst.num_schools(); ++c) school_groups.push_back({c});
  }

  for (StudentId s : sample_students(inst.num_students(), budget, rng)) {
    const auto base = reported.school_of(s);
    for (const auto& schools : school_groups) {
      const std::optional<SchoolId> which =
          inst.universal_priority ? std::nullopt
                                  : std::optional<SchoolId>(schools.front());
      if (const auto up = outcome_after_swap(s, -1, schools)) {
        if (student_prefers(inst, s, base, *up)) {
          return ImprovementWitness{s, ImprovementWitness::Probe::kImprovement,
                                    which, base, *up};
        }
      }
      if (const auto down = outcome_after_swap(s, +1, schools)) {
        if (student_prefers(inst, s, *down, base)) {
          return ImprovementWitness{
              s, ImprovementWitness::Probe::kUnderperformance, which, *down,
              base};
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<SchoolAdmits> admitted_by_school(const Instance& inst,
                                             const Matching& m) {
  std::vector<SchoolAdmits> out(inst.num_schools());
  for (SchoolId c = 0; c < inst.num_schools(); ++c) {
    auto& a = out[c];
    a.admitted = m.students_at(c).size();
    a.disadvantaged = disadvantaged_at(inst, m, c);
    a.disadvantaged_share =
        a.admitted == 0 ? 0.0
                        : static_cast<double>(a.disadvantaged) /
                              static_cast<double>(a.admitted);
  }
  return out;
}

AuditReport audit_matching(const Instance& inst,
                           const ReservationQuotas& quotas,
                           Mechanism mechanism, const Matching& m,
                           const Matching& baseline) {
  AuditReport r;
  r.mechanism = mechanism;
  r.disadvantaged_pairs =
      find_in_group_blocking_pairs(inst, m, Group::Disadvantaged);
  r.advantaged_pairs = find_in_group_blocking_pairs(inst, m, Group::Advantaged);
  r.disadvantaged_affected = affected_students(r.disadvantaged_pairs);
  r.advantaged_affected = affected_students(r.advantaged_pairs);
  r.disadvantaged_rank_change =
      rank_change_histogram(inst, baseline, m, Group::Disadvantaged);
  r.advantaged_rank_change =
      rank_change_histogram(inst, baseline, m, Group::Advantaged);
  r.admits = admitted_by_school(inst, m);
  r.highly_competitive = check_high_competitiveness(inst, quotas).holds;
  r.smart_reserve = check_smart_reserve(inst, quotas, baseline);
  return r;
}

}  // namespace reserve
