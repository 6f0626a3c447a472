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

#include "reserve/sda.h"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace reserve {

ChoiceProfile::ChoiceProfile(const Instance& inst,
                             std::vector<ChoiceContext> contexts)
    : contexts_(std::move(contexts)) {
  if (contexts_.size() != inst.num_schools()) {
    throw std::invalid_argument("choice profile covers " +
                                std::to_string(contexts_.size()) +
                                " schools, instance has " +
                                std::to_string(inst.num_schools()));
  }
}

ChoiceProfile ChoiceProfile::build(Mechanism mechanism, const Instance& inst,
                                   const ReservationQuotas& quotas) {
  if (mechanism == Mechanism::kDisc) {
    throw std::invalid_argument(
        "the discovery program is staged; use run_disc");
  }
  if (mechanism != Mechanism::kBase && quotas.size() != inst.num_schools()) {
    throw InputError("reservation quotas cover " +
                     std::to_string(quotas.size()) + " schools, instance has " +
                     std::to_string(inst.num_schools()));
  }
  ChoiceProfile p;
  p.groups_ = std::make_shared<const std::vector<Group>>(inst.groups());
  p.contexts_.reserve(inst.num_schools());
  for (SchoolId c = 0; c < inst.num_schools(); ++c) {
    const auto reserved =
        mechanism == Mechanism::kBase ? 0u : quotas.reserved(c);
    p.contexts_.emplace_back(mechanism, inst.schools[c].priority,
                             inst.schools[c].quota, reserved, *p.groups_);
  }
  return p;
}

ChoiceProfile ChoiceProfile::responsive(
    const Instance& inst, std::span<const std::uint32_t> capacities) {
  if (capacities.size() != inst.num_schools()) {
    throw std::invalid_argument("capacity vector does not cover every school");
  }
  ChoiceProfile p;
  p.groups_ = std::make_shared<const std::vector<Group>>(inst.groups());
  p.contexts_.reserve(inst.num_schools());
  for (SchoolId c = 0; c < inst.num_schools(); ++c) {
    p.contexts_.emplace_back(Mechanism::kBase, inst.schools[c].priority,
                             capacities[c], 0, *p.groups_);
  }
  return p;
}

bool ChoiceProfile::is_responsive() const {
  return std::all_of(contexts_.begin(), contexts_.end(),
                     [](const ChoiceContext& c) { return c.is_responsive(); });
}

namespace {

std::size_t longest_list(const Instance& inst) {
  std::size_t len = 0;
  for (const auto& st : inst.students) {
    len = std::max(len, st.preferences.size());
  }
  return len;
}

bool participates(const SdaOptions& options, StudentId s) {
  return options.participants.empty() || options.participants[s];
}

}  // namespace

Matching sda_rounds(const Instance& inst, const ChoiceProfile& profile,
                    const SdaOptions& options) {
  const auto n = inst.num_students();
  const auto m = inst.num_schools();
  if (profile.size() != m) {
    throw std::invalid_argument("choice profile does not cover every school");
  }
  if (!options.participants.empty() && options.participants.size() != n) {
    throw std::invalid_argument("participant mask does not cover every student");
  }

  std::vector<std::uint32_t> next(n, 0);
  std::vector<std::optional<SchoolId>> assigned(n);
  std::vector<StudentSet> held(m);
  std::vector<StudentSet> applicants(m);

  std::vector<StudentId> free;
  for (StudentId s = 0; s < n; ++s) {
    if (participates(options, s)) free.push_back(s);
  }

  const std::size_t round_cap = n * longest_list(inst) + 1;
  for (std::uint32_t round = 1;; ++round) {
    if (round > round_cap + 1) {
      throw InvariantError("deferred acceptance exceeded " +
                           std::to_string(round_cap) +
                           " rounds; the choice profile is inconsistent");
    }
    RoundTrace* log = nullptr;
    if (options.trace) {
      options.trace->push_back(RoundTrace{round, {}, {}});
      log = &options.trace->back();
    }

    std::vector<SchoolId> touched;
    for (StudentId s : free) {
      const auto& prefs = inst.students[s].preferences;
      if (next[s] >= prefs.size()) continue;
      const SchoolId c = prefs[next[s]];
      if (applicants[c].empty()) touched.push_back(c);
      applicants[c].push_back(s);
      if (log) log->applications.emplace_back(s, c);
    }
    if (touched.empty()) {
      if (options.trace) options.trace->pop_back();
      break;
    }

    free.clear();
    std::sort(touched.begin(), touched.end());
    for (SchoolId c : touched) {
      StudentSet pool = held[c];
      pool.insert(pool.end(), applicants[c].begin(), applicants[c].end());
      applicants[c].clear();
      StudentSet chosen = choose(profile.at(c), pool);
      for (StudentId s : pool) {
        if (std::binary_search(chosen.begin(), chosen.end(), s)) {
          assigned[s] = c;
        } else {
          assigned[s].reset();
          ++next[s];
          free.push_back(s);
          if (log) log->rejections.emplace_back(s, c);
        }
      }
      held[c] = std::move(chosen);
    }
    std::sort(free.begin(), free.end());
  }
  return Matching(std::move(assigned), m);
}

ProposalPolicy lowest_id_first() {
  return [](std::span<const PendingProposal> pending) -> std::size_t {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pending.size(); ++i) {
      if (pending[i].student < pending[best].student) best = i;
    }
    return best;
  };
}

ProposalPolicy random_order(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](std::span<const PendingProposal> pending) -> std::size_t {
    return std::uniform_int_distribution<std::size_t>(0, pending.size() - 1)(
        *rng);
  };
}

Matching sda_sequential(const Instance& inst, const ChoiceProfile& profile,
                        const ProposalPolicy& policy) {
  if (!profile.is_responsive()) {
    throw std::invalid_argument(
        "sequential deferred acceptance requires responsive choice rules");
  }
  const auto n = inst.num_students();
  const auto m = inst.num_schools();
  std::vector<std::uint32_t> next(n, 0);
  std::vector<std::optional<SchoolId>> assigned(n);
  std::vector<StudentSet> held(m);

  std::vector<PendingProposal> pending;
  const std::size_t step_cap = n * longest_list(inst) + 1;
  for (std::size_t step = 0;; ++step) {
    if (step > step_cap) {
      throw InvariantError("sequential deferred acceptance did not terminate");
    }
    pending.clear();
    for (StudentId s = 0; s < n; ++s) {
      const auto& prefs = inst.students[s].preferences;
      if (!assigned[s] && next[s] < prefs.size()) {
        pending.push_back({s, prefs[next[s]]});
      }
    }
    if (pending.empty()) break;
    const std::size_t pick = policy(pending);
    if (pick >= pending.size()) {
      throw std::out_of_range("proposal policy returned an invalid index");
    }
    const auto [s, c] = pending[pick];
    StudentSet pool = held[c];
    pool.push_back(s);
    StudentSet chosen = choose(profile.at(c), pool);
    for (StudentId t : pool) {
      if (std::binary_search(chosen.begin(), chosen.end(), t)) {
        assigned[t] = c;
      } else {
        assigned[t].reset();
        ++next[t];
      }
    }
    held[c] = std::move(chosen);
  }
  return Matching(std::move(assigned), m);
}

MechanismRun run_disc(const Instance& inst, const ReservationQuotas& quotas,
                      bool trace) {
  const auto n = inst.num_students();
  const auto m = inst.num_schools();
  if (quotas.size() != m) {
    throw InputError("reservation quotas do not cover every school");
  }
  MechanismRun run;
  run.mechanism = Mechanism::kDisc;
  run.quotas = quotas;
  auto* log = trace ? &run.trace : nullptr;

  std::vector<std::uint32_t> general(m);
  for (SchoolId c = 0; c < m; ++c) general[c] = quotas.general(inst, c);
  Matching stage1 = sda_rounds(inst, ChoiceProfile::responsive(inst, general),
                               SdaOptions{{}, log});

  std::vector<bool> mask(n);
  for (StudentId s = 0; s < n; ++s) {
    mask[s] = inst.is_disadvantaged(s) && !stage1.school_of(s);
  }
  Matching stage2 = sda_rounds(
      inst, ChoiceProfile::responsive(inst, quotas.values()),
      SdaOptions{mask, log});

  std::vector<std::uint32_t> leftover(m);
  for (SchoolId c = 0; c < m; ++c) {
    leftover[c] = quotas.reserved(c) -
                  static_cast<std::uint32_t>(stage2.students_at(c).size());
  }
  for (StudentId s = 0; s < n; ++s) {
    mask[s] = !inst.is_disadvantaged(s) && !stage1.school_of(s);
  }
  Matching stage3 = sda_rounds(inst, ChoiceProfile::responsive(inst, leftover),
                               SdaOptions{mask, log});

  std::vector<std::optional<SchoolId>> combined(n);
  for (StudentId s = 0; s < n; ++s) {
    int sources = 0;
    for (const Matching* stage : {&stage1, &stage2, &stage3}) {
      if (stage->school_of(s)) {
        combined[s] = stage->school_of(s);
        ++sources;
      }
    }
    if (sources > 1) {
      throw InvariantError("student " + std::to_string(s) +
                           " matched in more than one discovery stage");
    }
  }
  if (log) {
    for (std::size_t i = 0; i < log->size(); ++i) {
      (*log)[i].round = static_cast<std::uint32_t>(i + 1);
    }
  }
  run.matching = Matching(std::move(combined), m);
  run.stages = DiscStages{std::move(stage1), std::move(stage2),
                          std::move(stage3), std::move(leftover)};
  return run;
}

MechanismRun run_mechanism(Mechanism mechanism, const Instance& inst,
                           const ReservationQuotas& quotas, bool trace) {
  if (mechanism == Mechanism::kDisc) return run_disc(inst, quotas, trace);
  MechanismRun run;
  run.mechanism = mechanism;
  run.quotas = mechanism == Mechanism::kBase
                   ? ReservationQuotas::zeros(inst.num_schools())
                   : quotas;
  run.matching = sda_rounds(inst, ChoiceProfile::build(mechanism, inst, quotas),
                            SdaOptions{{}, trace ? &run.trace : nullptr});
  return run;
}

}  // namespace reserve
