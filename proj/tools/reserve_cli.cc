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

// Command-line front end. Exit status: 0 success, 1 input error, 2 invariant
// or theorem violation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reserve/audit.h"
#include "reserve/golden.h"
#include "reserve/io.h"
#include "reserve/market_gen.h"
#include "reserve/sda.h"

namespace fs = std::filesystem;
using namespace reserve;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kViolation = 2;

std::vector<Mechanism> parse_mechanisms(const std::vector<std::string>& names,
                                        bool default_all) {
  std::vector<Mechanism> out;
  for (const auto& n : names) out.push_back(parse_mechanism(n));
  if (out.empty() && default_all) {
    out = {Mechanism::kBase, Mechanism::kDisc, Mechanism::kMr,
           Mechanism::kJsa};
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

struct MarketArgs {
  std::string students;
  std::string schools;
  std::string quota = "percent:0";
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--students", students, "students CSV")->required();
    app->add_option("--schools", schools, "schools CSV")->required();
    app->add_option("--quota", quota,
                    "percent:F | proportional | file:PATH (code,reserved)");
    app->add_option("--seed", seed, "seed for missing lottery numbers");
  }
};

struct GenArgs {
  std::uint32_t schools = 8;
  std::uint32_t advantaged = 1872;
  std::uint32_t disadvantaged = 913;
  std::uint32_t quota = 64;
  std::uint32_t reserved = 21;
  double mean_adv = 408.76;
  double mean_dis = 362.40;
  double sd_adv = 92.53;
  double sd_dis = 83.13;
  double bias = 0.0;
  std::uint32_t list_length = 0;

  void attach(CLI::App* app) {
    app->add_option("--num-schools", schools);
    app->add_option("--advantaged", advantaged);
    app->add_option("--disadvantaged", disadvantaged);
    app->add_option("--school-quota", quota);
    app->add_option("--reserved", reserved);
    app->add_option("--mean-adv", mean_adv);
    app->add_option("--mean-dis", mean_dis);
    app->add_option("--sd-adv", sd_adv);
    app->add_option("--sd-dis", sd_dis);
    app->add_option("--bias", bias,
                    "merge groups by biased coin instead of potentials");
    app->add_option("--list-length", list_length, "truncate lists (0: full)");
  }

  HomogeneousMarketConfig config(std::uint64_t seed) const {
    HomogeneousMarketConfig c;
    c.schools = schools;
    c.advantaged = advantaged;
    c.disadvantaged = disadvantaged;
    c.quota = quota;
    c.reserved = reserved;
    c.interleave = bias > 0.0 ? InterleavePolicy::biased(bias)
                              : InterleavePolicy::potentials(normal());
    c.seed = seed;
    if (list_length > 0) c.list_length = list_length;
    return c;
  }

  NormalParams normal() const { return {mean_adv, mean_dis, sd_adv, sd_dis}; }
};

Market to_market(const GeneratedMarket& g) {
  std::vector<SchoolRecord> schools;
  for (SchoolId c = 0; c < g.instance.num_schools(); ++c) {
    schools.push_back({"C" + std::to_string(c + 1),
                       "School " + std::to_string(c + 1),
                       g.instance.schools[c].quota});
  }
  const auto& priority = g.instance.schools.front().priority;
  std::vector<StudentRecord> students;
  for (StudentId s = 0; s < g.instance.num_students(); ++s) {
    StudentRecord r;
    r.id = "S" + std::to_string(s + 1);
    // Scores keep the sampled potentials when present; the lottery encodes
    // the generated rank so reloading reproduces the order exactly.
    r.score = g.scores.empty() ? 0.0 : g.scores[s];
    r.lottery = priority.rank(s);
    r.disadvantaged = g.instance.is_disadvantaged(s);
    r.preferences = g.instance.students[s].preferences;
    students.push_back(std::move(r));
  }
  return build_market(SchoolTable(std::move(schools)), std::move(students), 0);
}

void write_quota_file(const fs::path& path, const Market& market,
                      const ReservationQuotas& quotas) {
  auto out = open_out(path);
  out << "code,reserved\n";
  for (SchoolId c = 0; c < market.schools.size(); ++c) {
    out << market.schools.code(c) << ',' << quotas.reserved(c) << '\n';
  }
}

int cmd_run(const MarketArgs& m, const std::vector<std::string>& mechs,
            const std::string& out, bool trace, std::uint32_t trials) {
  RunConfig config;
  config.students = m.students;
  config.schools = m.schools;
  config.mechanisms = parse_mechanisms(mechs, true);
  config.quota = m.quota;
  config.seed = m.seed;
  config.out_dir = out;
  config.trace = trace;
  config.probe_budget = trials;
  const auto result = run_experiment(config);
  std::cout << result.report;
  return kOk;
}

int cmd_audit(const MarketArgs& m, const std::string& matching_path,
              const std::vector<std::string>& mechs, const std::string& out) {
  const auto market = load_market(m.students, m.schools, m.seed);
  const auto quotas = apply_quota_policy(
      QuotaPolicy::parse(m.quota, market.schools), market.instance);
  const auto loaded = read_matching(fs::path(matching_path), market);
  const auto label = parse_mechanisms(mechs, false);
  if (label.size() != 1) {
    throw InputError("audit needs exactly one --mechanism to label the matching");
  }
  const Mechanism mech = label.front();
  const auto baseline =
      run_mechanism(Mechanism::kBase, market.instance, quotas).matching;
  const auto report = format_report(market, quotas, m.quota,
                                    {{mech, loaded.matching}}, baseline);
  std::cout << report;
  if (!out.empty()) {
    fs::create_directories(out);
    open_out(fs::path(out) / "audit.txt") << report;
  }
  return kOk;
}

int cmd_compare(const MarketArgs& m, const std::vector<std::string>& files,
                const std::vector<std::string>& mechs) {
  const auto market = load_market(m.students, m.schools, m.seed);
  const auto& inst = market.instance;
  std::vector<std::pair<std::string, Matching>> sides;
  for (const auto& f : files) {
    sides.emplace_back(f, read_matching(fs::path(f), market).matching);
  }
  if (!mechs.empty()) {
    const auto quotas = apply_quota_policy(
        QuotaPolicy::parse(m.quota, market.schools), inst);
    for (Mechanism mech : parse_mechanisms(mechs, false)) {
      sides.emplace_back(std::string(to_string(mech)),
                         run_mechanism(mech, inst, quotas).matching);
    }
  }
  if (sides.size() != 2) {
    throw InputError("compare needs exactly two sides (--matching or "
                     "--mechanism), got " + std::to_string(sides.size()));
  }
  for (Group g : {Group::Disadvantaged, Group::Advantaged}) {
    const auto v =
        compare_for_group(inst, sides[0].second, sides[1].second, g);
    std::cout << to_string(g) << ' ' << to_string(v.kind) << " (prefer "
              << sides[0].first << ' ' << v.prefer_first.size() << ", prefer "
              << sides[1].first << ' ' << v.prefer_second.size() << ")\n";
  }
  return kOk;
}

int cmd_generate(const GenArgs& g, std::uint64_t seed, std::uint32_t trials,
                 const std::string& out) {
  if (out.empty()) throw InputError("generate needs --out");
  const std::uint32_t count = std::max<std::uint32_t>(1, trials);
  for (std::uint32_t i = 0; i < count; ++i) {
    const fs::path dir =
        count == 1 ? fs::path(out) : fs::path(out) / ("market_" + std::to_string(i));
    fs::create_directories(dir);
    const auto gen =
        gen_homogeneous(g.config(count == 1 ? seed : derive_seed(seed, "market", i)));
    const auto market = to_market(gen);
    auto sf = open_out(dir / "schools.csv");
    write_schools(sf, market.schools);
    auto st = open_out(dir / "students.csv");
    write_students(st, market);
    write_quota_file(dir / "quota.csv", market, gen.quotas);
    std::cout << dir.string() << '\n';
  }
  return kOk;
}

int cmd_theorems(const GenArgs& g, std::uint64_t seed, std::uint32_t trials,
                 double eps, double p_adv, double p_dis) {
  std::cout << std::fixed << std::setprecision(4);
  const auto normal = g.normal();
  const auto t44 = check_thm44_condition(normal, p_adv, p_dis);
  std::cout << "normal-potential condition lhs " << t44.lhs << " rhs "
            << t44.rhs << ' ' << (t44.holds ? "holds" : "fails") << '\n';
  const auto probs = thm44_probabilities(g.schools, g.quota, g.reserved,
                                         g.advantaged, g.disadvantaged, eps);
  std::cout << "market p_M " << probs.p_advantaged << " p_m "
            << probs.p_disadvantaged << '\n';

  std::uint32_t hc = 0, rank_ok = 0, violations = 0;
  const std::uint32_t n = std::max<std::uint32_t>(1, trials);
  Thm43Check ranks;
  for (std::uint32_t t = 0; t < n; ++t) {
    const auto market = gen_homogeneous(g.config(derive_seed(seed, "hc-trial", t)));
    ranks = check_thm43_hypothesis(market.instance, g.quota, g.reserved, eps);
    if (ranks.holds) ++rank_ok;
    const auto v = verify_jsa_dominates_mr(market.instance, market.quotas);
    if (v.highly_competitive) ++hc;
    if (v.theorem_violation) ++violations;
  }
  std::cout << "rank thresholds r_M " << ranks.r_advantaged << " (cover form "
            << ranks.r_advantaged_cover << ") r_m " << ranks.r_disadvantaged
            << " proxies " << ranks.proxy_advantaged << ' '
            << ranks.proxy_disadvantaged << " structural "
            << (ranks.structural ? "yes" : "no") << '\n';
  std::cout << "rank condition held in " << rank_ok << '/' << n << '\n';
  const auto rate = wilson_interval(hc, n);
  std::cout << "highly competitive " << hc << '/' << n << " rate " << rate.rate
            << " 95% [" << rate.lower << ", " << rate.upper << "]\n";
  std::cout << "jsa-over-mr violations " << violations << '\n';
  return violations == 0 ? kOk : kViolation;
}

int cmd_selftest(const std::string& out) {
  bool ok = true;
  for (const auto& ex : golden_examples()) {
    for (const auto& check : verify_golden(ex)) {
      std::cout << (check.ok ? "PASS " : "FAIL ") << check.example << ' '
                << check.what;
      if (!check.ok) std::cout << " : " << check.detail;
      std::cout << '\n';
      ok = ok && check.ok;
    }
    if (!out.empty()) {
      const fs::path dir = fs::path(out) / ex.name;
      fs::create_directories(dir);
      const auto market = golden_market(ex);
      auto sf = open_out(dir / "schools.csv");
      write_schools(sf, market.schools);
      auto st = open_out(dir / "students.csv");
      write_students(st, market);
      write_quota_file(dir / "quota.csv", market, ex.quotas);
    }
  }
  return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"School choice with reserved seats"};
  app.require_subcommand(1);

  MarketArgs market;
  GenArgs gen;
  std::vector<std::string> mechanisms;
  std::vector<std::string> matchings;
  std::string out;
  std::string matching;
  std::uint64_t seed = 0;
  std::uint32_t trials = 0;
  double eps = 0.1, p_adv = 0.18, p_dis = 0.18;
  bool trace = false;

  auto* run = app.add_subcommand("run", "run mechanisms on a market");
  market.attach(run);
  run->add_option("--mechanism", mechanisms, "base, disc, mr or jsa");
  run->add_option("--out", out, "output directory");
  run->add_flag("--trace", trace, "write per-round proposal logs");
  run->add_option("--trials", trials, "misreport probes per student (0: off)");

  auto* audit = app.add_subcommand("audit", "audit an existing matching");
  MarketArgs audit_market;
  audit_market.attach(audit);
  audit->add_option("--matching", matching, "matching CSV")->required();
  audit->add_option("--mechanism", mechanisms, "label for the report");
  audit->add_option("--out", out, "output directory");

  auto* compare = app.add_subcommand("compare", "dominance between two sides");
  MarketArgs compare_market;
  compare_market.attach(compare);
  compare->add_option("--matching", matchings, "matching CSV (repeatable)");
  compare->add_option("--mechanism", mechanisms, "mechanism (repeatable)");

  auto* generate = app.add_subcommand("generate", "write synthetic markets");
  gen.attach(generate);
  generate->add_option("--seed", seed);
  generate->add_option("--trials", trials, "number of markets (default 1)");
  generate->add_option("--out", out)->required();

  auto* theorems =
      app.add_subcommand("theorems", "competitiveness checks and Monte Carlo");
  GenArgs theorem_gen;
  theorem_gen.attach(theorems);
  theorems->add_option("--seed", seed);
  theorems->add_option("--trials", trials, "Monte Carlo markets (default 20)");
  theorems->add_option("--eps", eps);
  theorems->add_option("--p-adv", p_adv);
  theorems->add_option("--p-dis", p_dis);

  auto* selftest = app.add_subcommand("selftest", "golden example suite");
  selftest->add_option("--out", out, "also export the examples as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*run) return cmd_run(market, mechanisms, out, trace, trials);
    if (*audit) return cmd_audit(audit_market, matching, mechanisms, out);
    if (*compare) return cmd_compare(compare_market, matchings, mechanisms);
    if (*generate) return cmd_generate(gen, seed, trials, out);
    if (*theorems) {
      return cmd_theorems(theorem_gen, seed, trials == 0 ? 20 : trials, eps,
                          p_adv, p_dis);
    }
    if (*selftest) return cmd_selftest(out);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kViolation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kViolation;
  }
  return kInputError;
}
