// SPDX-License-Identifier: Apache-2.0

#include "opm/presentation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "opm/error.hpp"

namespace opm {

const Term* Term::child(std::string_view slot_label) const {
  for (const Term& c : children) {
    if (c.slot == slot_label) return &c;
  }
  return nullptr;
}

Term& Term::with(std::string slot_label, Term c) {
  c.slot = std::move(slot_label);
  children.push_back(std::move(c));
  return *this;
}

bool operator==(const Term& a, const Term& b) {
  if (a.generator != b.generator || a.slot != b.slot) return false;
  if (a.children.size() != b.children.size()) return false;
  for (const Term& c : a.children) {
    const Term* other = b.child(c.slot);
    if (!other || !(c == *other)) return false;
  }
  return true;
}

std::string to_string(const Term& term) {
  std::string out = term.generator;
  if (term.children.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < term.children.size(); ++i) {
    if (i) out += ", ";
    out += term.children[i].slot + "->" + to_string(term.children[i]);
  }
  return out + ")";
}

void OperadPresentation::add_boundary(Boundary boundary) {
  if (find_boundary(boundary.name())) {
    throw ModelError("boundary " + boundary.name() + " declared twice");
  }
  boundaries_.push_back(std::move(boundary));
}

void OperadPresentation::add_generator(std::string name, Architecture arch) {
  if (find_generator(name)) throw ModelError("generator " + name + " declared twice");
  generators_.emplace_back(std::move(name), std::move(arch));
}

void OperadPresentation::add_equation(CoherenceEquation equation) {
  equations_.push_back(std::move(equation));
}

const Boundary* OperadPresentation::find_boundary(std::string_view name) const {
  for (const Boundary& b : boundaries_) {
    if (b.name() == name) return &b;
  }
  return nullptr;
}

const Architecture* OperadPresentation::find_generator(std::string_view name) const {
  for (const auto& [n, arch] : generators_) {
    if (n == name) return &arch;
  }
  return nullptr;
}

const Architecture& OperadPresentation::generator(std::string_view name) const {
  const Architecture* arch = find_generator(name);
  if (!arch) throw ModelError("unknown generator " + std::string(name));
  return *arch;
}

namespace {

void check_children(const OperadPresentation& p, const Term& term, const Architecture& arch) {
  std::set<std::string_view> seen;
  for (const Term& c : term.children) {
    if (!seen.insert(c.slot).second) {
      throw ModelError("term " + to_string(term) + " fills slot " + c.slot + " twice");
    }
    const Slot* slot = arch.find_slot(c.slot);
    if (!slot) throw ModelError("generator " + term.generator + " has no slot " + c.slot);
    const Architecture& child = p.generator(c.generator);
    if (!(child.output() == slot->boundary)) {
      throw ModelError("slot " + term.generator + "." + c.slot + " expects " +
                       slot->boundary.name() + " but " + c.generator + " produces " +
                       child.output().name());
    }
  }
}

void collect_leaves(const OperadPresentation& p, const Term& term, const std::string& prefix,
                    std::vector<PathStep>& route, std::vector<Leaf>& out) {
  const Architecture& arch = p.generator(term.generator);
  check_children(p, term, arch);
  for (const Slot& slot : arch.inputs()) {
    route.push_back(PathStep{term.generator, slot.label});
    std::string path = join_label(prefix, slot.label);
    if (const Term* c = term.child(slot.label)) {
      collect_leaves(p, *c, path, route, out);
    } else {
      out.push_back(Leaf{path, slot.boundary.name(), route});
    }
    route.pop_back();
  }
}

}  // namespace

std::vector<Leaf> leaves(const OperadPresentation& p, const Term& term) {
  std::vector<Leaf> out;
  std::vector<PathStep> route;
  collect_leaves(p, term, "", route, out);
  return out;
}

std::string output_boundary(const OperadPresentation& p, const Term& term) {
  return p.generator(term.generator).output().name();
}

Leaf find_leaf(const OperadPresentation& p, const Term& term, std::string_view query) {
  auto all = leaves(p, term);
  if (query.empty()) return Leaf{"", output_boundary(p, term), {}};
  std::vector<const Leaf*> hits;
  for (const Leaf& leaf : all) {
    if (leaf.path == query) return leaf;
    const std::string& path = leaf.path;
    if (path.size() > query.size() && path.compare(path.size() - query.size(), query.size(), query) == 0 &&
        path[path.size() - query.size() - 1] == '.') {
      hits.push_back(&leaf);
    }
  }
  if (hits.empty()) {
    throw ModelError("leaf " + std::string(query) + " does not occur in " + to_string(term));
  }
  if (hits.size() > 1) {
    throw ModelError("leaf " + std::string(query) + " is ambiguous in " + to_string(term));
  }
  return *hits.front();
}

namespace {

Term graft_at(const Term& host, std::string_view rest, const Term& scion) {
  Term out = host;
  // Descend into the child whose slot prefixes `rest`.
  for (Term& c : out.children) {
    if (rest.size() > c.slot.size() && rest.substr(0, c.slot.size()) == c.slot &&
        rest[c.slot.size()] == '.') {
      c = graft_at(c, rest.substr(c.slot.size() + 1), scion);
      return out;
    }
    if (rest == c.slot) throw ModelError("slot " + c.slot + " is already filled");
  }
  Term s = scion;
  s.slot = std::string(rest);
  out.children.push_back(std::move(s));
  return out;
}

}  // namespace

Term graft(const Term& host, std::string_view leaf_path, const Term& scion) {
  Term out = graft_at(host, leaf_path, scion);
  out.slot = host.slot;
  return out;
}

Architecture elaborate(const OperadPresentation& p, const Term& term) {
  const Architecture& arch = p.generator(term.generator);
  check_children(p, term, arch);
  std::map<std::string, Architecture> inner;
  for (const Term& c : term.children) inner.emplace(c.slot, elaborate(p, c));
  return compose(arch, inner);
}

ComponentCorrespondence derive_correspondence(
    const OperadPresentation& p, const Term& lhs, const Term& rhs,
    const std::vector<std::pair<std::string, std::string>>& explicit_pairs) {
  auto left = leaves(p, lhs);
  auto right = leaves(p, rhs);
  std::map<std::string, const Leaf*> left_by_path;
  std::map<std::string, const Leaf*> right_by_path;
  for (const Leaf& l : left) left_by_path[l.path] = &l;
  for (const Leaf& l : right) right_by_path[l.path] = &l;

  std::map<std::string, std::string> chosen;
  std::set<std::string> used;
  for (const auto& [a, b] : explicit_pairs) {
    if (!left_by_path.count(a)) throw ModelError("matching: no leaf " + a + " on the left");
    if (!right_by_path.count(b)) throw ModelError("matching: no leaf " + b + " on the right");
    if (chosen.count(a) || !used.insert(b).second) {
      throw ModelError("matching: " + a + " ~ " + b + " reuses a leaf");
    }
    chosen[a] = b;
  }
  std::map<std::string, std::vector<std::string>> open_right;
  for (const Leaf& l : right) {
    if (!used.count(l.path)) open_right[l.boundary].push_back(l.path);
  }
  std::map<std::string, std::size_t> open_left_count;
  for (const Leaf& l : left) {
    if (!chosen.count(l.path)) ++open_left_count[l.boundary];
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const Leaf& l : left) {
    if (auto it = chosen.find(l.path); it != chosen.end()) {
      pairs.emplace_back(l.path, it->second);
      continue;
    }
    auto& candidates = open_right[l.boundary];
    if (candidates.empty()) {
      throw ModelError("no component on the right matches " + l.path + ":" + l.boundary);
    }
    if (candidates.size() > 1 || open_left_count[l.boundary] > 1) {
      throw ModelError("ambiguous correspondence for boundary " + l.boundary +
                       "; give an explicit matching");
    }
    pairs.emplace_back(l.path, candidates.front());
    candidates.clear();
  }
  for (const auto& [boundary, rest] : open_right) {
    if (!rest.empty()) {
      throw ModelError("no component on the left matches " + rest.front() + ":" + boundary);
    }
  }
  return ComponentCorrespondence(std::move(pairs));
}

EquationReport check_equation(const OperadPresentation& p, const CoherenceEquation& e) {
  EquationReport report;
  report.lhs = to_string(e.lhs);
  report.rhs = to_string(e.rhs);
  try {
    Architecture a = elaborate(p, e.lhs);
    Architecture b = elaborate(p, e.rhs);
    report.comparison = equal(a, b, e.corr);
    report.passed = report.comparison.equal;
  } catch (const ModelError& err) {
    report.error = err.what();
    report.passed = false;
  }
  return report;
}

CompileReport compile(const OperadPresentation& p) {
  CompileReport report;
  report.boundaries = p.boundaries().size();
  report.generators = p.generators().size();
  report.equations = p.equations().size();

  for (const Boundary& b : p.boundaries()) {
    ++report.checks;
    CheckFailure f{"boundary " + b.name(), {}};
    for (const Port& port : b.ports()) {
      if (!p.types().contains(port.type)) {
        f.messages.push_back("port " + port.name + " has undeclared type " + port.type);
      }
    }
    if (!f.messages.empty()) report.failures.push_back(std::move(f));
  }

  auto check_declared = [&](const Boundary& used, CheckFailure& f, const std::string& where) {
    const Boundary* declared = p.find_boundary(used.name());
    if (!declared) {
      f.messages.push_back(where + " uses undeclared boundary " + used.name());
    } else if (!(*declared == used)) {
      f.messages.push_back(where + " uses a boundary " + used.name() +
                           " that differs from its declaration");
    }
  };
  for (const auto& [name, arch] : p.generators()) {
    ++report.checks;
    CheckFailure f{"generator " + name, {}};
    check_declared(arch.output(), f, "output");
    for (const Slot& s : arch.inputs()) check_declared(s.boundary, f, "slot " + s.label);
    for (auto& msg : validation_errors(arch)) f.messages.push_back(std::move(msg));
    if (!f.messages.empty()) report.failures.push_back(std::move(f));
  }

  for (std::size_t i = 0; i < p.equations().size(); ++i) {
    ++report.checks;
    const CoherenceEquation& e = p.equations()[i];
    EquationReport eq = check_equation(p, e);
    if (!eq.passed) {
      CheckFailure f{"equation " + eq.lhs + " = " + eq.rhs, {}};
      if (!eq.error.empty()) f.messages.push_back(eq.error);
      for (const auto& msg : eq.comparison.problems) f.messages.push_back(msg);
      report.failures.push_back(std::move(f));
    }
    report.equation_reports.push_back(std::move(eq));
  }
  return report;
}

}  // namespace opm
