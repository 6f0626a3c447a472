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

// Delimited-text ingestion and emission.
//
//   schools:   code,name,quota
//   students:  id,score,disadvantaged,lottery,prefs   (prefs: "S|B|T")
//   quotas:    code,reserved
//   matching:  id,school,seat_type                   ("-" when unmatched)
//
// Fields may be double-quoted; a doubled quote inside quotes is literal.

#ifndef RESERVE_IO_H_
#define RESERVE_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reserve/audit.h"
#include "reserve/choice.h"
#include "reserve/model.h"
#include "reserve/sda.h"

namespace reserve {

// Splits one CSV line into fields. Throws InputError on an unterminated
// quote.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

struct SchoolRecord {
  std::string code;
  std::string name;
  std::uint32_t quota = 0;
};

class SchoolTable {
 public:
  SchoolTable() = default;
  // Throws InputError on a duplicate or empty code.
  explicit SchoolTable(std::vector<SchoolRecord> records);

  const std::vector<SchoolRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  std::optional<SchoolId> find(std::string_view code) const;
  const std::string& code(SchoolId c) const { return records_[c].code; }

 private:
  std::vector<SchoolRecord> records_;
  std::unordered_map<std::string, SchoolId> index_;
};

struct StudentRecord {
  std::string id;
  double score = 0.0;
  bool disadvantaged = false;
  std::optional<std::uint64_t> lottery;
  std::vector<SchoolId> preferences;
};

struct RowError {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string message;
};

struct StudentLoad {
  std::vector<StudentRecord> records;
  std::vector<RowError> errors;
};

// Any malformed school row is fatal. Throws InputError with the line number.
SchoolTable load_schools(std::istream& in);
SchoolTable load_schools(const std::filesystem::path& path);

// Malformed rows are collected in `errors` and skipped. Throws InputError on
// I/O failure, a header mismatch or a duplicate id.
StudentLoad load_students(std::istream& in, const SchoolTable& schools);
StudentLoad load_students(const std::filesystem::path& path,
                          const SchoolTable& schools);

// Descending score, ties by ascending lottery. Records without a lottery get
// seed-derived draws disjoint from the provided numbers. Throws
// InvariantError if two records still share (score, lottery).
PriorityOrder build_priority(const std::vector<StudentRecord>& records,
                             std::uint64_t seed);

struct Market {
  SchoolTable schools;
  std::vector<StudentRecord> students;
  Instance instance;
  std::unordered_map<std::string, StudentId> student_index;
};

Market build_market(SchoolTable schools, std::vector<StudentRecord> students,
                    std::uint64_t seed);

// Loads both files; any student row error becomes an InputError listing the
// first few offending lines.
Market load_market(const std::filesystem::path& students,
                   const std::filesystem::path& schools, std::uint64_t seed);

void write_schools(std::ostream& out, const SchoolTable& schools);
void write_students(std::ostream& out, const Market& market);

struct QuotaPolicy {
  enum class Kind : std::uint8_t { kPercent, kProportional, kExplicit };
  Kind kind = Kind::kPercent;
  double fraction = 0.0;
  std::vector<std::uint32_t> counts;  // kExplicit, by school index
  std::string spec;                   // as given on the command line

  static QuotaPolicy percent(double fraction);
  static QuotaPolicy proportional();
  static QuotaPolicy explicit_counts(std::vector<std::uint32_t> counts);
  // "percent:F", "proportional" or "file:PATH" (a code,reserved file).
  static QuotaPolicy parse(std::string_view spec, const SchoolTable& schools);
};

// kPercent: ceil(q_c * f); kProportional: ceil(q_c * |S^m| / |S|);
// kExplicit: passthrough. Throws InputError when f is outside [0, 1], the
// count vector has the wrong size, or a count exceeds q_c.
ReservationQuotas apply_quota_policy(const QuotaPolicy& policy,
                                     const Instance& inst);

std::string_view to_string(SeatType t);

// Seat types default to general for matched students.
void write_matching(std::ostream& out, const Market& market, const Matching& m,
                    const std::vector<SeatType>& seats = {});

struct LoadedMatching {
  Matching matching;
  std::vector<SeatType> seats;
};

// Every student of the market must appear exactly once. Throws InputError.
LoadedMatching read_matching(std::istream& in, const Market& market);
LoadedMatching read_matching(const std::filesystem::path& path,
                             const Market& market);

// Seat types of a run: BASE is all general; the others come from the
// auxiliary-instance route.
std::vector<SeatType> seat_types_for(const MechanismRun& run,
                                     const Instance& inst);

struct RunConfig {
  std::filesystem::path students;
  std::filesystem::path schools;
  std::vector<Mechanism> mechanisms;
  std::string quota = "percent:0";
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  bool trace = false;
  // Misreport/priority-swap probes per student; 0 disables them.
  std::uint32_t probe_budget = 0;
};

struct ExperimentResult {
  ReservationQuotas quotas;
  Matching baseline;
  std::map<Mechanism, MechanismRun> runs;
  std::map<Mechanism, AuditReport> audits;
  bool highly_competitive = false;
  std::optional<DominanceVerdict> jsa_versus_mr;
  std::string report;
};

// Runs every mechanism, audits each against BASE and writes
// <mech>_matching.csv, <mech>_schools.csv, optional <mech>_trace.txt and
// report.txt into out_dir. Output is a pure function of inputs and seed.
ExperimentResult run_experiment(const RunConfig& config);

// Text report over already computed matchings (one per mechanism).
std::string format_report(const Market& market, const ReservationQuotas& quotas,
                          std::string_view quota_spec,
                          const std::map<Mechanism, Matching>& matchings,
                          const Matching& baseline);

void write_school_summary(std::ostream& out, const Market& market,
                          const ReservationQuotas& quotas, const Matching& m,
                          const std::vector<SeatType>& seats);

}  // namespace reserve

#endif  // RESERVE_IO_H_
