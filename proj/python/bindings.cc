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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "reserve/audit.h"
#include "reserve/golden.h"
#include "reserve/market_gen.h"
#include "reserve/model.h"
#include "reserve/sda.h"

namespace py = pybind11;
using namespace reserve;

namespace {

// Students are (disadvantaged, [school, ...]) pairs; `priority` lists student
// indices from highest to lowest.
Instance make_instance(
    const std::vector<std::pair<bool, std::vector<SchoolId>>>& students,
    const std::vector<std::uint32_t>& quotas,
    const std::vector<StudentId>& priority) {
  std::vector<Student> list;
  for (const auto& [dis, prefs] : students) {
    list.push_back(
        Student{dis ? Group::Disadvantaged : Group::Advantaged, prefs});
  }
  auto inst = Instance::with_universal_priority(
      std::move(list), quotas, PriorityOrder::from_order(priority));
  const auto problems = validate_instance(inst);
  if (!problems.empty()) throw InputError(problems.front().message);
  return inst;
}

Mechanism mech(const std::string& name) { return parse_mechanism(name); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deferred acceptance with reserved seats";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError",
                                         PyExc_RuntimeError);

  py::class_<Instance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("students"), py::arg("quotas"),
           py::arg("priority"))
      .def_property_readonly("num_students", &Instance::num_students)
      .def_property_readonly("num_schools", &Instance::num_schools)
      .def("is_disadvantaged", &Instance::is_disadvantaged);

  m.def(
      "run",
      [](const std::string& name, const Instance& inst,
         const std::vector<std::uint32_t>& reserved) {
        return run_mechanism(mech(name), inst, ReservationQuotas(reserved))
            .matching.assignment();
      },
      py::arg("mechanism"), py::arg("instance"), py::arg("reserved"),
      "Assigned school per student, None when unmatched.");

  m.def(
      "in_group_blocking_pairs",
      [](const Instance& inst,
         const std::vector<std::optional<SchoolId>>& assignment,
         bool disadvantaged) {
        const Matching mt(assignment, inst.num_schools());
        std::vector<std::pair<StudentId, SchoolId>> out;
        for (const auto& p : find_in_group_blocking_pairs(
                 inst, mt,
                 disadvantaged ? Group::Disadvantaged : Group::Advantaged)) {
          out.emplace_back(p.student, p.school);
        }
        return out;
      },
      py::arg("instance"), py::arg("assignment"),
      py::arg("disadvantaged") = true);

  m.def(
      "compare",
      [](const Instance& inst, const std::vector<std::optional<SchoolId>>& a,
         const std::vector<std::optional<SchoolId>>& b, bool disadvantaged) {
        const auto v = compare_for_group(
            inst, Matching(a, inst.num_schools()),
            Matching(b, inst.num_schools()),
            disadvantaged ? Group::Disadvantaged : Group::Advantaged);
        return std::string(to_string(v.kind));
      },
      py::arg("instance"), py::arg("first"), py::arg("second"),
      py::arg("disadvantaged") = true);

  m.def(
      "highly_competitive",
      [](const Instance& inst, const std::vector<std::uint32_t>& reserved) {
        return check_high_competitiveness(inst, ReservationQuotas(reserved))
            .holds;
      },
      py::arg("instance"), py::arg("reserved"));

  m.def("golden_names", [] {
    std::vector<std::string> out;
    for (const auto& ex : golden_examples()) out.push_back(ex.name);
    return out;
  });

  m.def(
      "verify_golden",
      [](const std::string& name) {
        bool ok = true;
        for (const auto& c : verify_golden(golden_example(name))) {
          ok = ok && c.ok;
        }
        return ok;
      },
      py::arg("name"));

  m.def(
      "thm44_condition",
      [](double mean_adv, double mean_dis, double sd_adv, double sd_dis,
         double p_adv, double p_dis) {
        const auto r = check_thm44_condition({mean_adv, mean_dis, sd_adv, sd_dis},
                                             p_adv, p_dis);
        return py::make_tuple(r.lhs, r.rhs, r.holds);
      },
      py::arg("mean_adv"), py::arg("mean_dis"), py::arg("sd_adv"),
      py::arg("sd_dis"), py::arg("p_adv"), py::arg("p_dis"));

  m.def("normal_quantile_approx", &normal_quantile_approx, py::arg("alpha"),
        py::arg("mean") = 0.0, py::arg("sd") = 1.0);

  m.def(
      "hc_rate",
      [](std::uint32_t schools, std::uint32_t advantaged,
         std::uint32_t disadvantaged, std::uint32_t quota,
         std::uint32_t reserved, double mean_adv, double mean_dis,
         double sd_adv, double sd_dis, std::uint32_t trials,
         std::uint64_t seed) {
        NormalPotentialConfig c;
        c.normal = {mean_adv, mean_dis, sd_adv, sd_dis};
        c.schools = schools;
        c.advantaged = advantaged;
        c.disadvantaged = disadvantaged;
        c.quota = quota;
        c.reserved = reserved;
        const auto r = monte_carlo_hc_rate(c, trials, seed);
        return py::make_tuple(r.rate, r.lower, r.upper);
      },
      py::arg("schools"), py::arg("advantaged"), py::arg("disadvantaged"),
      py::arg("quota"), py::arg("reserved"), py::arg("mean_adv"),
      py::arg("mean_dis"), py::arg("sd_adv"), py::arg("sd_dis"),
      py::arg("trials"), py::arg("seed"));
}
