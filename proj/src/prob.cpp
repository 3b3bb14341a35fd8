// SPDX-License-Identifier: Apache-2.0

#include "opm/prob.hpp"

#include <algorithm>
#include <set>

#include "opm/error.hpp"

namespace opm {

Distribution::Distribution(std::vector<std::pair<std::string, Probability>> entries)
    : entries_(std::move(entries)) {
  std::set<std::string_view> seen;
  Rational total = 0;
  for (const auto& [label, p] : entries_) {
    if (!seen.insert(label).second) throw ModelError("duplicate label " + label + " in distribution");
    total += p.value();
  }
  if (total != 1) {
    throw ModelError("distribution " + to_string(*this) + " sums to " + opm::to_string(total) +
                     ", not 1");
  }
}

Distribution Distribution::unit(std::string label) {
  return Distribution({{std::move(label), Probability(1)}});
}

std::vector<std::string> Distribution::labels() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

bool Distribution::contains(std::string_view label) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == label; });
}

const Probability& Distribution::at(std::string_view label) const {
  for (const auto& [l, p] : entries_) {
    if (l == label) return p;
  }
  throw ModelError("no entry " + std::string(label) + " in distribution " + to_string(*this));
}

Distribution Distribution::reordered(const std::vector<std::string>& labels) const {
  if (labels.size() != entries_.size()) {
    throw ModelError("distribution " + to_string(*this) + " has " +
                     std::to_string(entries_.size()) + " entries, expected " +
                     std::to_string(labels.size()));
  }
  std::vector<std::pair<std::string, Probability>> out;
  for (const auto& l : labels) out.emplace_back(l, at(l));
  return Distribution(std::move(out));
}

std::string to_string(const Distribution& d) {
  std::string out = "(";
  for (std::size_t i = 0; i < d.entries().size(); ++i) {
    if (i) out += ", ";
    out += d.entries()[i].first + ": " + to_string(d.entries()[i].second);
  }
  return out + ")";
}

Distribution compose_dist(const Distribution& p, const std::map<std::string, Distribution>& qs) {
  for (const auto& [label, q] : qs) {
    if (!p.contains(label)) throw ModelError("compose_dist: unknown label " + label);
  }
  std::vector<std::pair<std::string, Probability>> out;
  for (const auto& [label, pi] : p.entries()) {
    auto it = qs.find(label);
    if (it == qs.end()) {
      out.emplace_back(label, pi);
      continue;
    }
    for (const auto& [sub, qij] : it->second.entries()) {
      out.emplace_back(join_label(label, sub), Probability(pi.value() * qij.value()));
    }
  }
  return Distribution(std::move(out));
}

void ProbFunctor::set(std::string generator, Distribution d) {
  values_.insert_or_assign(std::move(generator), std::move(d));
}

const Distribution& ProbFunctor::at(std::string_view generator) const {
  auto it = values_.find(std::string(generator));
  if (it == values_.end()) {
    throw ModelError("functor " + name_ + " has no value for generator " + std::string(generator));
  }
  return it->second;
}

namespace {

std::vector<std::string> slot_labels(const Architecture& arch) {
  std::vector<std::string> out;
  for (const Slot& s : arch.inputs()) out.push_back(s.label);
  return out;
}

Distribution value_for(const OperadPresentation& p, const ProbFunctor& F, const std::string& gen) {
  const Architecture& arch = p.generator(gen);
  const Distribution& d = F.at(gen);
  if (d.size() != arch.arity()) {
    throw ModelError("arity mismatch: " + F.name() + "(" + gen + ") has " +
                     std::to_string(d.size()) + " entries but " + gen + " has " +
                     std::to_string(arch.arity()) + " inputs");
  }
  return d.reordered(slot_labels(arch));
}

}  // namespace

void check_shape(const OperadPresentation& p, const ProbFunctor& F) {
  for (const auto& [gen, arch] : p.generators()) value_for(p, F, gen);
  for (const auto& [gen, d] : F.values()) {
    if (!p.find_generator(gen)) throw ModelError("functor " + F.name() + " names unknown generator " + gen);
  }
}

Distribution evaluate(const OperadPresentation& p, const ProbFunctor& F, const Term& term) {
  Distribution d = value_for(p, F, term.generator);
  std::map<std::string, Distribution> qs;
  for (const Term& c : term.children) qs.emplace(c.slot, evaluate(p, F, c));
  return compose_dist(d, qs);
}

bool ProbCheckReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const ProbRow& r) { return r.passed; });
}

std::size_t ProbCheckReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ProbRow& r) { return !r.passed; }));
}

namespace {

std::vector<Factor> factors(const OperadPresentation& p, const ProbFunctor& F, const Leaf& leaf) {
  std::vector<Factor> out;
  for (const PathStep& step : leaf.route) {
    out.push_back(Factor{step.generator, step.slot, value_for(p, F, step.generator).at(step.slot).value()});
  }
  return out;
}

Rational product(const std::vector<Factor>& fs) {
  Rational out = 1;
  for (const Factor& f : fs) out *= f.value;
  return out;
}

}  // namespace

ProbCheckReport check_prob_functor(const OperadPresentation& p, const ProbFunctor& F,
                                   const Probability& tolerance) {
  check_shape(p, F);
  ProbCheckReport report;
  report.functor = F.name();
  report.tolerance = tolerance.value();
  for (std::size_t i = 0; i < p.equations().size(); ++i) {
    const CoherenceEquation& e = p.equations()[i];
    auto left = leaves(p, e.lhs);
    auto right = leaves(p, e.rhs);
    for (const Leaf& l : left) {
      auto target = e.corr.map(l.path);
      if (!target) throw ModelError("equation correspondence misses leaf " + l.path);
      auto r = std::find_if(right.begin(), right.end(), [&](const Leaf& x) { return x.path == *target; });
      if (r == right.end()) throw ModelError("equation correspondence names unknown leaf " + *target);
      ProbRow row;
      row.equation = i;
      row.lhs_leaf = l.path;
      row.rhs_leaf = r->path;
      row.boundary = l.boundary;
      row.lhs_factors = factors(p, F, l);
      row.rhs_factors = factors(p, F, *r);
      row.lhs = product(row.lhs_factors);
      row.rhs = product(row.rhs_factors);
      row.passed = abs(row.lhs - row.rhs) <= report.tolerance;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

Probability leaf_probability(const OperadPresentation& p, const ProbFunctor& F, const Term& term,
                             std::string_view leaf) {
  Leaf found = find_leaf(p, term, leaf);
  return Probability(product(factors(p, F, found)));
}

std::vector<std::string> symbolic_constraints(const OperadPresentation& p) {
  auto side = [](const Leaf& leaf) {
    std::string out;
    for (const PathStep& step : leaf.route) {
      if (!out.empty()) out += "·";
      out += step.generator + "(" + step.slot + ")";
    }
    return out;
  };
  std::vector<std::string> out;
  for (const CoherenceEquation& e : p.equations()) {
    auto left = leaves(p, e.lhs);
    auto right = leaves(p, e.rhs);
    for (const Leaf& l : left) {
      auto target = e.corr.map(l.path);
      auto r = std::find_if(right.begin(), right.end(),
                            [&](const Leaf& x) { return target && x.path == *target; });
      if (r == right.end()) throw ModelError("equation correspondence misses leaf " + l.path);
      out.push_back(side(l) + "=" + side(*r));
    }
  }
  return out;
}

}  // namespace opm
