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

#include "reserve/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "reserve/aux_instance.h"
#include "reserve/market_gen.h"

namespace reserve {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::optional<bool> parse_flag(std::string_view text) {
  const auto t = lower(trim(text));
  if (t == "1" || t == "true" || t == "yes" || t == "y") return true;
  if (t == "0" || t == "false" || t == "no" || t == "n") return false;
  return std::nullopt;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

// Reads lines, skipping blank ones; the first non-blank line must match
// `expected` column names.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::vector<std::string_view> expected,
            std::string_view what)
      : in_(in) {
    std::vector<std::string> header;
    if (!next(header)) {
      throw InputError(std::string(what) + " file is empty");
    }
    bool ok = header.size() == expected.size();
    for (std::size_t i = 0; ok && i < header.size(); ++i) {
      ok = lower(trim(header[i])) == expected[i];
    }
    if (!ok) {
      std::string want;
      for (auto e : expected) want += (want.empty() ? "" : ",") + std::string(e);
      throw InputError(std::string(what) + " header must be '" + want + "'");
    }
  }

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (trim(line).empty()) continue;
      fields = split_csv_line(line);
      return true;
    }
    return false;
  }

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

std::string at_line(std::size_t line, std::string_view msg) {
  return "line " + std::to_string(line) + ": " + std::string(msg);
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  if (quoted) throw InputError("unterminated quote");
  return fields;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

SchoolTable::SchoolTable(std::vector<SchoolRecord> records)
    : records_(std::move(records)) {
  for (SchoolId c = 0; c < records_.size(); ++c) {
    const auto& code = records_[c].code;
    if (code.empty()) throw InputError("empty school code");
    if (code == "-" || code.find('|') != std::string::npos) {
      throw InputError("school code '" + code + "' is reserved syntax");
    }
    if (!index_.emplace(code, c).second) {
      throw InputError("duplicate school code '" + code + "'");
    }
  }
}

std::optional<SchoolId> SchoolTable::find(std::string_view code) const {
  const auto it = index_.find(std::string(code));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SchoolTable load_schools(std::istream& in) {
  CsvReader reader(in, {"code", "name", "quota"}, "schools");
  std::vector<SchoolRecord> records;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != 3) {
      throw InputError(at_line(reader.line(), "expected 3 fields"));
    }
    const auto quota = parse_number<std::uint32_t>(f[2]);
    if (!quota) {
      throw InputError(at_line(reader.line(), "bad quota '" + f[2] + "'"));
    }
    records.push_back({std::string(trim(f[0])), std::string(trim(f[1])), *quota});
  }
  return SchoolTable(std::move(records));
}

SchoolTable load_schools(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_schools(in);
}

StudentLoad load_students(std::istream& in, const SchoolTable& schools) {
  CsvReader reader(in, {"id", "score", "disadvantaged", "lottery", "prefs"},
                   "students");
  StudentLoad out;
  std::unordered_set<std::string> seen;
  std::vector<std::string> f;
  while (reader.next(f)) {
    const auto line = reader.line();
    const auto fail = [&](std::string msg) {
      out.errors.push_back({line, std::move(msg)});
    };
    if (f.size() != 5) {
      fail("expected 5 fields, found " + std::to_string(f.size()));
      continue;
    }
    StudentRecord r;
    r.id = std::string(trim(f[0]));
    if (r.id.empty()) {
      fail("empty id");
      continue;
    }
    if (!seen.insert(r.id).second) {
      throw InputError(at_line(line, "duplicate student id '" + r.id + "'"));
    }
    const auto score = parse_number<double>(f[1]);
    if (!score || !std::isfinite(*score)) {
      fail("bad score '" + f[1] + "'");
      continue;
    }
    r.score = *score;
    const auto flag = parse_flag(f[2]);
    if (!flag) {
      fail("bad disadvantaged flag '" + f[2] + "'");
      continue;
    }
    r.disadvantaged = *flag;
    if (!trim(f[3]).empty()) {
      r.lottery = parse_number<std::uint64_t>(f[3]);
      if (!r.lottery) {
        fail("bad lottery '" + f[3] + "'");
        continue;
      }
    }
    bool ok = true;
    std::string_view prefs = trim(f[4]);
    std::set<SchoolId> listed;
    while (ok && !prefs.empty()) {
      const auto bar = prefs.find('|');
      const auto code = trim(prefs.substr(0, bar));
      prefs = bar == std::string_view::npos ? std::string_view{}
                                            : prefs.substr(bar + 1);
      const auto c = schools.find(code);
      if (!c) {
        fail("unknown school code '" + std::string(code) + "'");
        ok = false;
      } else if (!listed.insert(*c).second) {
        fail("school '" + std::string(code) + "' listed twice");
        ok = false;
      } else {
        r.preferences.push_back(*c);
      }
    }
    if (ok) out.records.push_back(std::move(r));
  }
  return out;
}

StudentLoad load_students(const std::filesystem::path& path,
                          const SchoolTable& schools) {
  auto in = open_input(path);
  return load_students(in, schools);
}

PriorityOrder build_priority(const std::vector<StudentRecord>& records,
                             std::uint64_t seed) {
  const auto n = records.size();
  std::vector<std::uint64_t> lottery(n);
  std::unordered_set<std::uint64_t> taken;
  std::size_t missing = 0;
  for (const auto& r : records) {
    if (r.lottery) {
      taken.insert(*r.lottery);
    } else {
      ++missing;
    }
  }
  // Pool of the smallest values not used by any provided lottery.
  std::vector<std::uint64_t> pool;
  for (std::uint64_t v = 0; pool.size() < missing; ++v) {
    if (!taken.count(v)) pool.push_back(v);
  }
  std::mt19937_64 rng(derive_seed(seed, "lottery"));
  std::shuffle(pool.begin(), pool.end(), rng);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    lottery[i] = records[i].lottery ? *records[i].lottery : pool[next++];
  }

  std::vector<StudentId> order(n);
  std::iota(order.begin(), order.end(), StudentId{0});
  std::sort(order.begin(), order.end(), [&](StudentId a, StudentId b) {
    if (records[a].score != records[b].score) {
      return records[a].score > records[b].score;
    }
    return lottery[a] < lottery[b];
  });
  for (std::size_t i = 1; i < n; ++i) {
    const auto a = order[i - 1], b = order[i];
    if (records[a].score == records[b].score && lottery[a] == lottery[b]) {
      throw InvariantError("students '" + records[a].id + "' and '" +
                           records[b].id + "' share score and lottery");
    }
  }
  return PriorityOrder::from_order(std::move(order));
}

Market build_market(SchoolTable schools, std::vector<StudentRecord> students,
                    std::uint64_t seed) {
  Market m;
  std::vector<Student> list;
  list.reserve(students.size());
  for (StudentId s = 0; s < students.size(); ++s) {
    const auto& r = students[s];
    list.push_back(Student{r.disadvantaged ? Group::Disadvantaged
                                           : Group::Advantaged,
                           r.preferences});
    m.student_index.emplace(r.id, s);
  }
  std::vector<std::uint32_t> quotas;
  for (const auto& rec : schools.records()) quotas.push_back(rec.quota);
  m.instance = Instance::with_universal_priority(
      std::move(list), std::move(quotas), build_priority(students, seed));
  m.schools = std::move(schools);
  m.students = std::move(students);
  return m;
}

Market load_market(const std::filesystem::path& students,
                   const std::filesystem::path& schools, std::uint64_t seed) {
  auto table = load_schools(schools);
  auto load = load_students(students, table);
  if (!load.errors.empty()) {
    std::string msg = students.string() + ": " +
                      std::to_string(load.errors.size()) + " malformed row(s)";
    for (std::size_t i = 0; i < load.errors.size() && i < 5; ++i) {
      msg += "\n  " + at_line(load.errors[i].line, load.errors[i].message);
    }
    throw InputError(msg);
  }
  return build_market(std::move(table), std::move(load.records), seed);
}

void write_schools(std::ostream& out, const SchoolTable& schools) {
  out << "code,name,quota\n";
  for (const auto& r : schools.records()) {
    out << csv_escape(r.code) << ',' << csv_escape(r.name) << ',' << r.quota
        << '\n';
  }
}

void write_students(std::ostream& out, const Market& market) {
  out << "id,score,disadvantaged,lottery,prefs\n";
  for (const auto& r : market.students) {
    std::string prefs;
    for (SchoolId c : r.preferences) {
      if (!prefs.empty()) prefs += '|';
      prefs += market.schools.code(c);
    }
    std::ostringstream score;
    score << std::setprecision(17) << r.score;
    out << csv_escape(r.id) << ',' << score.str() << ','
        << (r.disadvantaged ? 1 : 0) << ','
        << (r.lottery ? std::to_string(*r.lottery) : std::string()) << ','
        << csv_escape(prefs) << '\n';
  }
}

QuotaPolicy QuotaPolicy::percent(double fraction) {
  QuotaPolicy p;
  p.kind = Kind::kPercent;
  p.fraction = fraction;
  std::ostringstream s;
  s << "percent:" << fraction;
  p.spec = s.str();
  return p;
}

QuotaPolicy QuotaPolicy::proportional() {
  QuotaPolicy p;
  p.kind = Kind::kProportional;
  p.spec = "proportional";
  return p;
}

QuotaPolicy QuotaPolicy::explicit_counts(std::vector<std::uint32_t> counts) {
  QuotaPolicy p;
  p.kind = Kind::kExplicit;
  p.counts = std::move(counts);
  p.spec = "explicit";
  return p;
}

QuotaPolicy QuotaPolicy::parse(std::string_view spec,
                               const SchoolTable& schools) {
  spec = trim(spec);
  QuotaPolicy p;
  if (spec == "proportional") {
    p = proportional();
  } else if (spec.substr(0, 8) == "percent:") {
    const auto f = parse_number<double>(spec.substr(8));
    if (!f) throw InputError("bad percent quota '" + std::string(spec) + "'");
    p = percent(*f);
  } else if (spec.substr(0, 5) == "file:") {
    const std::filesystem::path path(std::string(spec.substr(5)));
    auto in = open_input(path);
    CsvReader reader(in, {"code", "reserved"}, "quota");
    std::vector<std::optional<std::uint32_t>> counts(schools.size());
    std::vector<std::string> f;
    while (reader.next(f)) {
      const auto c = f.size() == 2 ? schools.find(trim(f[0])) : std::nullopt;
      const auto v =
          f.size() == 2 ? parse_number<std::uint32_t>(f[1]) : std::nullopt;
      if (!c || !v) throw InputError(at_line(reader.line(), "bad quota row"));
      if (counts[*c]) {
        throw InputError(at_line(reader.line(), "school listed twice"));
      }
      counts[*c] = *v;
    }
    std::vector<std::uint32_t> values;
    for (SchoolId c = 0; c < counts.size(); ++c) {
      if (!counts[c]) {
        throw InputError(path.string() + ": no reserved quota for school '" +
                         schools.code(c) + "'");
      }
      values.push_back(*counts[c]);
    }
    p = explicit_counts(std::move(values));
  } else {
    throw InputError("unknown quota policy '" + std::string(spec) + "'");
  }
  p.spec = std::string(spec);
  return p;
}

ReservationQuotas apply_quota_policy(const QuotaPolicy& policy,
                                     const Instance& inst) {
  const auto m = inst.num_schools();
  std::vector<std::uint32_t> out(m);
  switch (policy.kind) {
    case QuotaPolicy::Kind::kPercent:
      if (!(policy.fraction >= 0.0 && policy.fraction <= 1.0)) {
        throw InputError("percent quota fraction must lie in [0, 1]");
      }
      // The epsilon keeps exact products such as 635 * 0.2 from rounding up.
      for (SchoolId c = 0; c < m; ++c) {
        out[c] = static_cast<std::uint32_t>(
            std::ceil(inst.schools[c].quota * policy.fraction - 1e-9));
      }
      break;
    case QuotaPolicy::Kind::kProportional: {
      const std::uint64_t total = inst.num_students();
      const std::uint64_t dis = inst.count(Group::Disadvantaged);
      for (SchoolId c = 0; c < m; ++c) {
        out[c] = total == 0 ? 0
                            : static_cast<std::uint32_t>(
                                  (inst.schools[c].quota * dis + total - 1) /
                                  total);
      }
      break;
    }
    case QuotaPolicy::Kind::kExplicit:
      if (policy.counts.size() != m) {
        throw InputError("explicit quotas cover " +
                         std::to_string(policy.counts.size()) +
                         " schools, market has " + std::to_string(m));
      }
      out = policy.counts;
      break;
  }
  for (SchoolId c = 0; c < m; ++c) {
    if (out[c] > inst.schools[c].quota) {
      throw InputError("reserved quota " + std::to_string(out[c]) +
                       " exceeds quota " +
                       std::to_string(inst.schools[c].quota) + " at school " +
                       std::to_string(c));
    }
  }
  return ReservationQuotas(std::move(out));
}

std::string_view to_string(SeatType t) {
  switch (t) {
    case SeatType::kNone:
      return "-";
    case SeatType::kGeneral:
      return "general";
    case SeatType::kReserved:
      return "reserved";
  }
  return "?";
}

void write_matching(std::ostream& out, const Market& market, const Matching& m,
                    const std::vector<SeatType>& seats) {
  out << "id,school,seat_type\n";
  for (StudentId s = 0; s < market.students.size(); ++s) {
    const auto& c = m.school_of(s);
    SeatType seat = SeatType::kNone;
    if (c) seat = seats.empty() ? SeatType::kGeneral : seats[s];
    out << csv_escape(market.students[s].id) << ','
        << (c ? csv_escape(market.schools.code(*c)) : std::string("-")) << ','
        << to_string(seat) << '\n';
  }
}

LoadedMatching read_matching(std::istream& in, const Market& market) {
  CsvReader reader(in, {"id", "school", "seat_type"}, "matching");
  const auto n = market.students.size();
  std::vector<std::optional<SchoolId>> assignment(n);
  std::vector<SeatType> seats(n, SeatType::kNone);
  std::vector<bool> seen(n, false);
  std::vector<std::string> f;
  while (reader.next(f)) {
    const auto line = reader.line();
    if (f.size() != 3) throw InputError(at_line(line, "expected 3 fields"));
    const auto it = market.student_index.find(std::string(trim(f[0])));
    if (it == market.student_index.end()) {
      throw InputError(at_line(line, "unknown student '" + f[0] + "'"));
    }
    const StudentId s = it->second;
    if (seen[s]) throw InputError(at_line(line, "student listed twice"));
    seen[s] = true;
    const auto code = trim(f[1]);
    const auto seat = lower(trim(f[2]));
    if (code == "-") {
      if (seat != "-" && !seat.empty()) {
        throw InputError(at_line(line, "unmatched student with a seat type"));
      }
      continue;
    }
    const auto c = market.schools.find(code);
    if (!c) throw InputError(at_line(line, "unknown school '" + f[1] + "'"));
    assignment[s] = *c;
    if (seat == "general") {
      seats[s] = SeatType::kGeneral;
    } else if (seat == "reserved") {
      seats[s] = SeatType::kReserved;
    } else {
      throw InputError(at_line(line, "bad seat type '" + f[2] + "'"));
    }
  }
  for (StudentId s = 0; s < n; ++s) {
    if (!seen[s]) {
      throw InputError("matching has no row for student '" +
                       market.students[s].id + "'");
    }
  }
  LoadedMatching out{Matching(std::move(assignment), market.schools.size()),
                     std::move(seats)};
  const auto problems = validate_matching(market.instance, out.matching);
  if (!problems.empty()) throw InputError(problems.front().message);
  return out;
}

LoadedMatching read_matching(const std::filesystem::path& path,
                             const Market& market) {
  auto in = open_input(path);
  return read_matching(in, market);
}

std::vector<SeatType> seat_types_for(const MechanismRun& run,
                                     const Instance& inst) {
  if (run.mechanism == Mechanism::kBase) {
    std::vector<SeatType> out(inst.num_students(), SeatType::kNone);
    for (StudentId s = 0; s < inst.num_students(); ++s) {
      if (run.matching.school_of(s)) out[s] = SeatType::kGeneral;
    }
    return out;
  }
  const auto aux = build_aux(inst, run.quotas, run.mechanism);
  const auto aux_matching = sda_rounds(
      aux.instance, ChoiceProfile::build(Mechanism::kBase, aux.instance, {}));
  if (!(project(aux_matching, inst) == run.matching)) {
    throw InvariantError("auxiliary route disagrees with " +
                         std::string(to_string(run.mechanism)));
  }
  return seat_types(aux_matching);
}

void write_school_summary(std::ostream& out, const Market& market,
                          const ReservationQuotas& quotas, const Matching& m,
                          const std::vector<SeatType>& seats) {
  out << "code,quota,reserved,admitted,disadvantaged,reserved_filled\n";
  const auto admits = admitted_by_school(market.instance, m);
  for (SchoolId c = 0; c < market.schools.size(); ++c) {
    std::size_t filled = 0;
    for (StudentId s : m.students_at(c)) {
      if (!seats.empty() && seats[s] == SeatType::kReserved) ++filled;
    }
    out << csv_escape(market.schools.code(c)) << ','
        << market.instance.schools[c].quota << ',' << quotas.reserved(c) << ','
        << admits[c].admitted << ',' << admits[c].disadvantaged << ',' << filled
        << '\n';
  }
}

namespace {

std::string histogram_text(const RankHistogram& h) {
  std::string out;
  for (const auto& [delta, count] : h) {
    if (!out.empty()) out += ' ';
    switch (delta.kind) {
      case RankDelta::Kind::kNumeric:
        out += (delta.delta > 0 ? "+" : "") + std::to_string(delta.delta);
        break;
      case RankDelta::Kind::kGainedSeat:
        out += "gained";
        break;
      case RankDelta::Kind::kLostSeat:
        out += "lost";
        break;
    }
    out += ':' + std::to_string(count);
  }
  return out.empty() ? "(none)" : out;
}

std::string render_report(const Market& market,
                          const ReservationQuotas& quotas,
                          std::string_view quota_spec,
                          const std::map<Mechanism, Matching>& matchings,
                          const std::map<Mechanism, AuditReport>& audits,
                          bool hc, bool smart) {
  const auto& inst = market.instance;
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "students " << inst.num_students() << " (advantaged "
      << inst.count(Group::Advantaged) << ", disadvantaged "
      << inst.count(Group::Disadvantaged) << ")\n";
  out << "schools " << inst.num_schools() << "\n";
  out << "quota policy " << quota_spec << "\n";
  out << "reserved";
  for (SchoolId c = 0; c < inst.num_schools(); ++c) {
    out << ' ' << market.schools.code(c) << '=' << quotas.reserved(c) << '/'
        << inst.schools[c].quota;
  }
  out << "\nhighly competitive " << (hc ? "yes" : "no") << "\n";
  out << "smart reserve " << (smart ? "yes" : "no") << "\n";

  for (const auto& [mech, m] : matchings) {
    const auto& a = audits.at(mech);
    out << "\n[" << to_string(mech) << "]\n";
    out << "matched " << m.num_matched() << "/" << inst.num_students() << "\n";
    out << "blocking pairs disadvantaged " << a.disadvantaged_pairs.size()
        << " affected " << a.disadvantaged_affected << "\n";
    out << "blocking pairs advantaged " << a.advantaged_pairs.size()
        << " affected " << a.advantaged_affected << "\n";
    out << "rank change disadvantaged "
        << histogram_text(a.disadvantaged_rank_change) << "\n";
    out << "rank change advantaged "
        << histogram_text(a.advantaged_rank_change) << "\n";
    out << "admits code,admitted,disadvantaged,share\n";
    for (SchoolId c = 0; c < inst.num_schools(); ++c) {
      out << "  " << market.schools.code(c) << ',' << a.admits[c].admitted
          << ',' << a.admits[c].disadvantaged << ','
          << a.admits[c].disadvantaged_share << "\n";
    }
  }

  if (matchings.size() > 1) {
    out << "\n[comparisons]\n";
    for (auto i = matchings.begin(); i != matchings.end(); ++i) {
      for (auto j = std::next(i); j != matchings.end(); ++j) {
        for (Group g : {Group::Disadvantaged, Group::Advantaged}) {
          const auto v = compare_for_group(inst, j->second, i->second, g);
          out << to_string(j->first) << " vs " << to_string(i->first) << ' '
              << to_string(g) << ' ' << to_string(v.kind) << " (prefer "
              << to_string(j->first) << ' ' << v.prefer_first.size()
              << ", prefer " << to_string(i->first) << ' '
              << v.prefer_second.size() << ")\n";
        }
      }
    }
    if (matchings.count(Mechanism::kMr) && matchings.count(Mechanism::kJsa)) {
      const auto v = compare_for_group(inst, matchings.at(Mechanism::kJsa),
                                       matchings.at(Mechanism::kMr),
                                       Group::Disadvantaged);
      out << "jsa vs mr verdict " << to_string(v.kind) << "\n";
    }
  }
  return out.str();
}

std::map<Mechanism, AuditReport> audit_all(
    const Market& market, const ReservationQuotas& quotas,
    const std::map<Mechanism, Matching>& matchings, const Matching& baseline) {
  std::map<Mechanism, AuditReport> audits;
  for (const auto& [mech, m] : matchings) {
    audits.emplace(mech,
                   audit_matching(market.instance, quotas, mech, m, baseline));
  }
  return audits;
}

void write_trace(std::ostream& out, const Market& market,
                 const std::vector<RoundTrace>& trace) {
  for (const auto& r : trace) {
    out << "round " << r.round << "\n";
    for (const auto& [s, c] : r.applications) {
      out << "  apply " << market.students[s].id << ' '
          << market.schools.code(c) << "\n";
    }
    for (const auto& [s, c] : r.rejections) {
      out << "  reject " << market.students[s].id << ' '
          << market.schools.code(c) << "\n";
    }
  }
}

}  // namespace

std::string format_report(const Market& market, const ReservationQuotas& quotas,
                          std::string_view quota_spec,
                          const std::map<Mechanism, Matching>& matchings,
                          const Matching& baseline) {
  const auto audits = audit_all(market, quotas, matchings, baseline);
  return render_report(
      market, quotas, quota_spec, matchings, audits,
      check_high_competitiveness(market.instance, quotas).holds,
      check_smart_reserve(market.instance, quotas, baseline));
}

ExperimentResult run_experiment(const RunConfig& config) {
  if (config.mechanisms.empty()) {
    throw InputError("at least one mechanism is required");
  }
  const auto market = load_market(config.students, config.schools, config.seed);
  const auto policy = QuotaPolicy::parse(config.quota, market.schools);
  const auto& inst = market.instance;

  ExperimentResult result;
  result.quotas = apply_quota_policy(policy, inst);
  const auto problems = validate_instance(inst, result.quotas);
  if (!problems.empty()) throw InputError(problems.front().message);

  result.baseline = run_mechanism(Mechanism::kBase, inst, result.quotas).matching;
  std::map<Mechanism, Matching> matchings;
  for (Mechanism mech : config.mechanisms) {
    if (result.runs.count(mech)) continue;
    auto run = run_mechanism(mech, inst, result.quotas, config.trace);
    const auto issues = validate_matching(inst, run.matching);
    if (!issues.empty()) throw InvariantError(issues.front().message);
    matchings.emplace(mech, run.matching);
    result.runs.emplace(mech, std::move(run));
  }
  result.audits = audit_all(market, result.quotas, matchings, result.baseline);
  const auto hc = check_high_competitiveness(inst, result.quotas);
  result.highly_competitive = hc.holds;
  if (matchings.count(Mechanism::kMr) && matchings.count(Mechanism::kJsa)) {
    result.jsa_versus_mr =
        compare_for_group(inst, matchings.at(Mechanism::kJsa),
                          matchings.at(Mechanism::kMr), Group::Disadvantaged);
  }
  result.report = render_report(
      market, result.quotas, policy.spec, matchings, result.audits, hc.holds,
      check_smart_reserve(inst, result.quotas, result.baseline));

  if (config.probe_budget > 0) {
    std::ostringstream probes;
    probes << "\n[probes]\n";
    for (const auto& [mech, run] : result.runs) {
      const auto sp = probe_strategyproofness(
          mech, inst, result.quotas, config.probe_budget,
          derive_seed(config.seed, "probe-sp", static_cast<std::uint64_t>(mech)));
      const auto ri = probe_respect_improvements(
          mech, inst, result.quotas, config.probe_budget,
          derive_seed(config.seed, "probe-ri", static_cast<std::uint64_t>(mech)));
      probes << to_string(mech) << " misreport "
             << (sp ? market.students[sp->student].id : std::string("none"))
             << " improvement "
             << (ri ? market.students[ri->student].id : std::string("none"))
             << "\n";
    }
    result.report += probes.str();
  }

  if (!config.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw InputError("cannot create " + config.out_dir.string());
    for (const auto& [mech, run] : result.runs) {
      const std::string name(to_string(mech));
      const auto seats = seat_types_for(run, inst);
      auto mf = open_output(config.out_dir / (name + "_matching.csv"));
      write_matching(mf, market, run.matching, seats);
      auto sf = open_output(config.out_dir / (name + "_schools.csv"));
      write_school_summary(sf, market, run.quotas, run.matching, seats);
      if (config.trace) {
        auto tf = open_output(config.out_dir / (name + "_trace.txt"));
        write_trace(tf, market, run.trace);
      }
    }
    auto rf = open_output(config.out_dir / "report.txt");
    rf << result.report;
  }
  return result;
}

}  // namespace reserve
