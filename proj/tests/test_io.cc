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
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "reserve/golden.h"
#include "reserve/io.h"
#include "reserve/market_gen.h"

namespace reserve {
namespace {

namespace fs = std::filesystem;

SchoolTable nyc_table() {
  std::istringstream in(
      "code,name,quota\n"
      "S,Stuyvesant High School,3\n"
      "B,Bronx High School of Science,2\n"
      "T,Brooklyn Technical High School,4\n");
  return load_schools(in);
}

StudentRecord record(std::string id, double score,
                     std::optional<std::uint64_t> lottery) {
  StudentRecord r;
  r.id = std::move(id);
  r.score = score;
  r.lottery = lottery;
  return r;
}

// Fresh scratch directory per test.
fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("reserve_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

TEST_CASE("csv lines split with quotes") {
  CHECK(split_csv_line("a,b,,c") ==
        std::vector<std::string>{"a", "b", "", "c"});
  CHECK(split_csv_line("\"x, y\",\"say \"\"hi\"\"\"") ==
        std::vector<std::string>{"x, y", "say \"hi\""});
  CHECK_THROWS_AS(split_csv_line("\"open"), InputError);
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(split_csv_line(csv_escape("q\"t,")) ==
        std::vector<std::string>{"q\"t,"});
}

TEST_CASE("school tables") {
  const auto t = nyc_table();
  CHECK(t.size() == 3);
  CHECK(t.find("B") == SchoolId{1});
  CHECK_FALSE(t.find("Z"));
  CHECK(t.records()[0].name == "Stuyvesant High School");
  std::istringstream dup("code,name,quota\nS,a,1\nS,b,1\n");
  CHECK_THROWS_AS(load_schools(dup), InputError);
  std::istringstream bad("code,name,quota\nS,a,many\n");
  CHECK_THROWS_WITH_AS(load_schools(bad), doctest::Contains("line 2"),
                       InputError);
  std::istringstream header("code,quota\nS,1\n");
  CHECK_THROWS_AS(load_schools(header), InputError);
  CHECK_THROWS_AS(SchoolTable({{"-", "none", 1}}), InputError);
  CHECK_THROWS_AS(SchoolTable({{"a|b", "pipe", 1}}), InputError);
}

TEST_CASE("student files parse with row-level errors") {
  const auto t = nyc_table();
  std::istringstream ok(
      "id,score,disadvantaged,lottery,prefs\n"
      "a,90,1,3,S|B|T\n"
      "b,85.5,false,,T\n"
      "c,70,yes,1,\n");
  const auto load = load_students(ok, t);
  REQUIRE(load.records.size() == 3);
  CHECK(load.errors.empty());
  CHECK(load.records[0].preferences == std::vector<SchoolId>{0, 1, 2});
  CHECK(load.records[0].disadvantaged);
  CHECK(load.records[0].lottery == 3u);
  CHECK(load.records[1].score == 85.5);
  CHECK_FALSE(load.records[1].lottery);
  CHECK(load.records[2].preferences.empty());

  std::istringstream mixed(
      "id,score,disadvantaged,lottery,prefs\n"
      "a,90,1,,S|Z\n"
      "b,80,0,,T\n"
      "c,,0,,T\n"
      "d,70,maybe,,S\n"
      "e,60,0,,S|S\n");
  const auto partial = load_students(mixed, t);
  CHECK(partial.records.size() == 1);
  REQUIRE(partial.errors.size() == 4);
  CHECK(partial.errors[0].line == 2);
  CHECK(partial.errors[0].message.find("Z") != std::string::npos);
  CHECK(partial.errors[3].line == 6);

  std::istringstream dup(
      "id,score,disadvantaged,lottery,prefs\na,1,0,,S\na,2,0,,B\n");
  CHECK_THROWS_AS(load_students(dup, t), InputError);
  std::istringstream header("id,score,prefs\na,1,S\n");
  CHECK_THROWS_AS(load_students(header, t), InputError);
  CHECK_THROWS_AS(load_students(fs::path("/nonexistent/students.csv"), t),
                  InputError);
}

TEST_CASE("priority from scores and lotteries") {
  const std::vector<StudentRecord> recs = {record("id1", 90, 5),
                                           record("id2", 80, 1),
                                           record("id3", 90, 2)};
  CHECK(build_priority(recs, 0).order() == std::vector<StudentId>{2, 0, 1});

  // Distinct scores: lotteries play no role.
  const std::vector<StudentRecord> distinct = {
      record("a", 1, 9), record("b", 3, 8), record("c", 2, 7)};
  CHECK(build_priority(distinct, 0).order() ==
        std::vector<StudentId>{1, 2, 0});

  const std::vector<StudentRecord> drawn = {
      record("a", 50, std::nullopt), record("b", 50, std::nullopt),
      record("c", 50, 0), record("d", 50, std::nullopt)};
  const auto first = build_priority(drawn, 7).order();
  CHECK(build_priority(drawn, 7).order() == first);
  // Drawn numbers avoid the provided 0, so c always leads.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK(build_priority(drawn, seed).order().front() == 2);
  }
  std::set<std::vector<StudentId>> orders;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    orders.insert(build_priority(drawn, seed).order());
  }
  CHECK(orders.size() > 1);

  const std::vector<StudentRecord> clash = {record("a", 1, 4),
                                            record("b", 1, 4)};
  CHECK_THROWS_AS(build_priority(clash, 0), InvariantError);
}

TEST_CASE("quota policies") {
  const Instance one = Instance::with_universal_priority(
      {Student{Group::Advantaged, {0}}}, {635}, PriorityOrder::identity(1));
  CHECK(apply_quota_policy(QuotaPolicy::percent(0.2), one).reserved(0) == 127);
  CHECK(apply_quota_policy(QuotaPolicy::percent(0.0), one).reserved(0) == 0);
  CHECK_THROWS_AS(apply_quota_policy(QuotaPolicy::percent(1.5), one),
                  InputError);

  // 9132 disadvantaged out of 27855 students.
  std::vector<Student> students(27855, Student{Group::Advantaged, {0}});
  for (std::size_t s = 0; s < 9132; ++s) {
    students[s].group = Group::Disadvantaged;
  }
  const Instance nyc = Instance::with_universal_priority(
      std::move(students), {635, 10}, PriorityOrder::identity(27855));
  const auto prop = apply_quota_policy(QuotaPolicy::proportional(), nyc);
  CHECK(prop.reserved(0) == 209);
  CHECK(prop.reserved(1) == 4);

  CHECK(apply_quota_policy(QuotaPolicy::explicit_counts({3, 0}), nyc)
            .values() == std::vector<std::uint32_t>{3, 0});
  CHECK_THROWS_AS(apply_quota_policy(QuotaPolicy::explicit_counts({11, 11}),
                                     nyc),
                  InputError);
  CHECK_THROWS_AS(apply_quota_policy(QuotaPolicy::explicit_counts({1}), nyc),
                  InputError);
}

TEST_CASE("quota policy strings") {
  const auto t = nyc_table();
  const auto p = QuotaPolicy::parse("percent:0.25", t);
  CHECK(p.kind == QuotaPolicy::Kind::kPercent);
  CHECK(p.fraction == 0.25);
  CHECK(QuotaPolicy::parse("proportional", t).kind ==
        QuotaPolicy::Kind::kProportional);
  CHECK_THROWS_AS(QuotaPolicy::parse("percent:x", t), InputError);
  CHECK_THROWS_AS(QuotaPolicy::parse("lottery", t), InputError);

  const auto dir = scratch("quota");
  spit(dir / "q.csv", "code,reserved\nT,2\nS,1\nB,0\n");
  const auto f = QuotaPolicy::parse("file:" + (dir / "q.csv").string(), t);
  CHECK(f.kind == QuotaPolicy::Kind::kExplicit);
  CHECK(f.counts == std::vector<std::uint32_t>{1, 0, 2});
  spit(dir / "short.csv", "code,reserved\nT,2\n");
  CHECK_THROWS_AS(
      QuotaPolicy::parse("file:" + (dir / "short.csv").string(), t),
      InputError);
}

TEST_CASE("matching files round trip") {
  const auto& ex = golden_example("discovery_blocking_pair");
  const auto market = golden_market(ex);
  for (auto mech : {Mechanism::kBase, Mechanism::kDisc, Mechanism::kMr,
                    Mechanism::kJsa}) {
    const auto run = run_mechanism(mech, market.instance, ex.quotas);
    const auto seats = seat_types_for(run, market.instance);
    std::ostringstream out;
    write_matching(out, market, run.matching, seats);
    std::istringstream in(out.str());
    const auto back = read_matching(in, market);
    CHECK(back.matching == run.matching);
    CHECK(back.seats == seats);
  }

  std::istringstream missing("id,school,seat_type\nsM1,c1,general\n");
  CHECK_THROWS_AS(read_matching(missing, market), InputError);
  std::istringstream unknown(
      "id,school,seat_type\nsM1,c9,general\nsM2,-,-\nsM3,-,-\n"
      "sm1,-,-\nsm2,-,-\nsm3,-,-\n");
  CHECK_THROWS_AS(read_matching(unknown, market), InputError);
}

TEST_CASE("student and school files round trip") {
  const auto& ex = golden_example("mr_jsa_incomparable");
  const auto market = golden_market(ex);
  std::ostringstream schools, students;
  write_schools(schools, market.schools);
  write_students(students, market);
  std::istringstream sin(schools.str());
  const auto table = load_schools(sin);
  std::istringstream stin(students.str());
  auto load = load_students(stin, table);
  CHECK(load.errors.empty());
  const auto again = build_market(table, std::move(load.records), 0);
  CHECK(again.instance.schools[0].priority.order() ==
        market.instance.schools[0].priority.order());
}

RunConfig golden_config(const std::string& name, const fs::path& out) {
  const auto dir = fs::path(RESERVE_TEST_DATA) / "golden" / name;
  RunConfig c;
  c.students = dir / "students.csv";
  c.schools = dir / "schools.csv";
  c.quota = "file:" + (dir / "quota.csv").string();
  c.mechanisms = {Mechanism::kBase, Mechanism::kDisc, Mechanism::kMr,
                  Mechanism::kJsa};
  c.out_dir = out;
  return c;
}

TEST_CASE("experiment outputs are byte-identical across reruns") {
  const auto a = scratch("rerun_a");
  const auto b = scratch("rerun_b");
  auto ca = golden_config("mr_jsa_incomparable", a);
  auto cb = golden_config("mr_jsa_incomparable", b);
  ca.trace = cb.trace = true;
  ca.probe_budget = cb.probe_budget = 3;
  const auto ra = run_experiment(ca);
  const auto rb = run_experiment(cb);
  CHECK(ra.report == rb.report);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto other = b / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
    ++files;
  }
  CHECK(files == 13);
  REQUIRE(ra.jsa_versus_mr);
  CHECK(ra.jsa_versus_mr->kind == DominanceVerdict::Kind::kIncomparable);
  CHECK(ra.report.find("[comparisons]") != std::string::npos);
}

TEST_CASE("golden experiments reproduce the expected matchings") {
  for (const auto& ex : golden_examples()) {
    const auto out = scratch("golden_" + ex.name);
    run_experiment(golden_config(ex.name, out));
    const auto expected =
        fs::path(RESERVE_TEST_DATA) / "golden" / ex.name / "expected";
    for (const auto& entry : fs::directory_iterator(expected)) {
      CHECK_MESSAGE(slurp(entry.path()) ==
                        slurp(out / entry.path().filename()),
                    ex.name, " ", entry.path().filename().string());
    }
  }
}

TEST_CASE("baseline-only runs have no comparison section") {
  const auto out = scratch("base_only");
  auto c = golden_config("discovery_hurts_all", out);
  c.mechanisms = {Mechanism::kBase};
  const auto r = run_experiment(c);
  CHECK(r.report.find("[comparisons]") == std::string::npos);
  CHECK_FALSE(r.jsa_versus_mr);
  CHECK(fs::exists(out / "report.txt"));
  CHECK(fs::exists(out / "base_matching.csv"));
  CHECK_FALSE(fs::exists(out / "base_trace.txt"));
  c.mechanisms.clear();
  CHECK_THROWS_AS(run_experiment(c), InputError);
}

TEST_CASE("MR fills exactly the reserve under high competitiveness") {
  std::size_t hc = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    NormalPotentialConfig c;
    c.normal = {408.76, 362.40, 92.53, 83.13};
    c.schools = 4;
    c.quota = 30;
    c.reserved = 10;
    c.advantaged = 400;
    c.disadvantaged = 200;
    c.seed = seed;
    const auto m = gen_normal_potentials(c);
    const auto mr =
        run_mechanism(Mechanism::kMr, m.instance, m.quotas).matching;
    const auto admits = admitted_by_school(m.instance, mr);
    const auto check = check_high_competitiveness(m.instance, m.quotas, mr);
    for (SchoolId s = 0; s < admits.size(); ++s) {
      if (check.holds) {
        CHECK(admits[s].disadvantaged == m.quotas.reserved(s));
        CHECK(admits[s].disadvantaged_share ==
              doctest::Approx(10.0 / 30.0));
      }
    }
    hc += check.holds;
  }
  CHECK(hc >= 8);
}

}  // namespace
}  // namespace reserve
