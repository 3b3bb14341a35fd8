// SPDX-License-Identifier: Apache-2.0

#include "report_json.hpp"

namespace opm::cli {

json rational_json(const Rational& r) {
  return {{"exact", to_string(r)}, {"percent", to_percent(r)}};
}

json to_json(const Architecture& arch) {
  json slots = json::array();
  for (const Slot& s : arch.inputs()) {
    slots.push_back({{"label", s.label}, {"boundary", s.boundary.name()}});
  }
  json wires = json::array();
  for (const Wire& w : arch.wires()) {
    json ports = json::array();
    for (const PortRef& p : w.ports) ports.push_back(to_string(p));
    wires.push_back({{"type", w.type}, {"ports", ports}});
  }
  return {{"slots", slots}, {"output", arch.output().name()}, {"wires", wires}};
}

json to_json(const Distribution& d) {
  json out = json::array();
  for (const auto& [label, p] : d.entries()) {
    json e = rational_json(p.value());
    e["label"] = label;
    out.push_back(e);
  }
  return out;
}

namespace {

json wires_json(const std::vector<Wire>& ws) {
  json out = json::array();
  for (const Wire& w : ws) out.push_back(to_string(w));
  return out;
}

json factors_json(const std::vector<Factor>& fs) {
  json out = json::array();
  for (const Factor& f : fs) {
    out.push_back({{"generator", f.generator}, {"slot", f.slot}, {"value", to_string(f.value)}});
  }
  return out;
}

}  // namespace

json to_json(const CompileReport& r) {
  json failures = json::array();
  for (const CheckFailure& f : r.failures) {
    failures.push_back({{"location", f.location}, {"messages", f.messages}});
  }
  json equations = json::array();
  for (const EquationReport& e : r.equation_reports) {
    equations.push_back({{"lhs", e.lhs},
                         {"rhs", e.rhs},
                         {"passed", e.passed},
                         {"error", e.error},
                         {"problems", e.comparison.problems},
                         {"only_lhs", wires_json(e.comparison.only_lhs)},
                         {"only_rhs", wires_json(e.comparison.only_rhs)}});
  }
  return {{"ok", r.ok()},
          {"boundaries", r.boundaries},
          {"generators", r.generators},
          {"equations", r.equations},
          {"checks", r.checks},
          {"failures", failures},
          {"equation_reports", equations}};
}

json to_json(const ProbCheckReport& r) {
  json rows = json::array();
  for (const ProbRow& row : r.rows) {
    rows.push_back({{"equation", row.equation},
                    {"lhs_leaf", row.lhs_leaf},
                    {"rhs_leaf", row.rhs_leaf},
                    {"boundary", row.boundary},
                    {"lhs_factors", factors_json(row.lhs_factors)},
                    {"rhs_factors", factors_json(row.rhs_factors)},
                    {"lhs", rational_json(row.lhs)},
                    {"rhs", rational_json(row.rhs)},
                    {"passed", row.passed}});
  }
  return {{"functor", r.functor},
          {"kind", "prob"},
          {"tolerance", to_string(r.tolerance)},
          {"passed", r.passed()},
          {"failures", r.failures()},
          {"rows", rows}};
}

json to_json(const ModeCheckReport& r) {
  json eqs = json::array();
  for (const ModeEquationResult& e : r.equations) {
    eqs.push_back({{"equation", e.equation},
                   {"lhs", e.lhs},
                   {"rhs", e.rhs},
                   {"passed", e.passed},
                   {"only_lhs", e.only_lhs},
                   {"only_rhs", e.only_rhs}});
  }
  return {{"functor", r.functor}, {"kind", "modes"}, {"passed", r.passed()}, {"equations", eqs}};
}

json to_json(const LiftingReport& r) {
  json gens = json::array();
  for (const GeneratorLifting& g : r.generators) {
    json violations = json::array();
    for (const PtResidual& v : g.pt.violations) {
      violations.push_back({{"slot", v.slot},
                            {"mode", v.mode},
                            {"weighted", to_string(v.weighted)},
                            {"expected", to_string(v.expected)},
                            {"residual", to_string(v.residual)}});
    }
    gens.push_back({{"generator", g.generator},
                    {"passed", g.passed()},
                    {"pt_condition", g.pt.holds},
                    {"max_residual", to_string(g.pt.max_residual)},
                    {"violations", violations},
                    {"empty_slots", g.pt.empty_slots},
                    {"aggr_ok", g.aggr_ok},
                    {"aggr", g.aggr_value},
                    {"supp_ok", g.supp_ok},
                    {"only_kernel", g.only_kernel},
                    {"only_relation", g.only_relation},
                    {"problems", g.problems}});
  }
  json eqs = json::array();
  for (const EquationLifting& e : r.equations) {
    eqs.push_back({{"equation", e.equation},
                   {"lhs", e.lhs},
                   {"rhs", e.rhs},
                   {"passed", e.passed()},
                   {"kernel_ok", e.kernel_ok},
                   {"priors_ok", e.priors_ok},
                   {"aggr_ok", e.aggr_ok},
                   {"supp_ok", e.supp_ok},
                   {"max_difference", to_string(e.max_difference)},
                   {"differences", e.differences}});
  }
  return {{"stoch", r.stoch},
          {"prob", r.prob},
          {"modes", r.modes},
          {"kind", "lifting"},
          {"passed", r.passed()},
          {"problems", r.problems},
          {"generators", gens},
          {"equations", eqs}};
}

}  // namespace opm::cli
