// SPDX-License-Identifier: Apache-2.0

#include "opm/modes.hpp"

#include <algorithm>
#include <tuple>

#include "opm/error.hpp"

namespace opm {

ModeSet::ModeSet(std::string boundary, std::vector<FailureMode> modes)
    : boundary_(std::move(boundary)), modes_(std::move(modes)) {
  std::set<std::string_view> seen;
  for (const auto& m : modes_) {
    if (!seen.insert(m.id).second) {
      throw ModelError("duplicate failure mode " + m.id + " on " + boundary_);
    }
  }
}

std::vector<std::string> ModeSet::ids() const {
  std::vector<std::string> out;
  for (const auto& m : modes_) out.push_back(m.id);
  return out;
}

bool ModeSet::contains(std::string_view id) const {
  return std::any_of(modes_.begin(), modes_.end(), [&](const FailureMode& m) { return m.id == id; });
}

const SlotRelation* ModeRelation::find(std::string_view slot) const {
  for (const SlotRelation& s : slots) {
    if (s.slot == slot) return &s;
  }
  return nullptr;
}

ModeRelation identity_relation(const std::vector<std::string>& modes) {
  SlotRelation slot{"", modes, {}};
  for (const auto& m : modes) slot.pairs.emplace(m, m);
  return ModeRelation{modes, {std::move(slot)}};
}

ModeRelation compose_rel(const ModeRelation& outer,
                         const std::map<std::string, ModeRelation>& inners) {
  for (const auto& [label, inner] : inners) {
    const SlotRelation* slot = outer.find(label);
    if (!slot) throw ModelError("compose_rel: no slot " + label);
    if (inner.output_modes != slot->input_modes) {
      throw ModelError("mode-set mismatch at slot " + label);
    }
  }
  ModeRelation out{outer.output_modes, {}};
  for (const SlotRelation& slot : outer.slots) {
    auto it = inners.find(slot.slot);
    if (it == inners.end()) {
      out.slots.push_back(slot);
      continue;
    }
    // index the outer leg by intermediate mode
    std::map<std::string, std::vector<std::string>> effects;
    for (const auto& [y, x] : slot.pairs) effects[y].push_back(x);
    for (const SlotRelation& sub : it->second.slots) {
      SlotRelation composite{join_label(slot.slot, sub.slot), sub.input_modes, {}};
      for (const auto& [z, y] : sub.pairs) {
        auto e = effects.find(y);
        if (e == effects.end()) continue;
        for (const auto& x : e->second) composite.pairs.emplace(z, x);
      }
      out.slots.push_back(std::move(composite));
    }
  }
  return out;
}

void ModeFunctor::add_mode_set(ModeSet set) {
  std::string key = set.boundary();
  if (mode_sets_.count(key)) throw ModelError("mode set for " + key + " given twice");
  mode_sets_.emplace(std::move(key), std::move(set));
}

void ModeFunctor::set_relation(std::string generator, ModeRelation relation) {
  relations_.insert_or_assign(std::move(generator), std::move(relation));
}

const ModeSet& ModeFunctor::modes(std::string_view boundary) const {
  auto it = mode_sets_.find(std::string(boundary));
  if (it == mode_sets_.end()) {
    throw ModelError("functor " + name_ + " has no mode set for " + std::string(boundary));
  }
  return it->second;
}

const ModeRelation& ModeFunctor::relation(std::string_view generator) const {
  auto it = relations_.find(std::string(generator));
  if (it == relations_.end()) {
    throw ModelError("functor " + name_ + " has no relation for " + std::string(generator));
  }
  return it->second;
}

ModeRelation make_relation(const OperadPresentation& p, const ModeFunctor& M,
                           std::string_view generator,
                           const std::vector<std::tuple<std::string, std::string, std::string>>& pairs) {
  const Architecture& arch = p.generator(generator);
  const ModeSet& out_modes = M.modes(arch.output().name());
  ModeRelation rel{out_modes.ids(), {}};
  for (const Slot& s : arch.inputs()) {
    rel.slots.push_back(SlotRelation{s.label, M.modes(s.boundary.name()).ids(), {}});
  }
  for (const auto& [slot, input, output] : pairs) {
    auto it = std::find_if(rel.slots.begin(), rel.slots.end(),
                           [&](const SlotRelation& s) { return s.slot == slot; });
    if (it == rel.slots.end()) {
      throw ModelError("generator " + std::string(generator) + " has no slot " + slot);
    }
    const Slot* s = arch.find_slot(slot);
    if (!M.modes(s->boundary.name()).contains(input)) {
      throw ModelError("unknown mode " + input + " on " + s->boundary.name());
    }
    if (!out_modes.contains(output)) {
      throw ModelError("unknown mode " + output + " on " + arch.output().name());
    }
    it->pairs.emplace(input, output);
  }
  return rel;
}

void check_shape(const OperadPresentation& p, const ModeFunctor& M) {
  for (const auto& [gen, arch] : p.generators()) {
    const ModeRelation& rel = M.relation(gen);
    if (rel.output_modes != M.modes(arch.output().name()).ids()) {
      throw ModelError("relation " + gen + " does not use the modes of " + arch.output().name());
    }
    if (rel.slots.size() != arch.arity()) {
      throw ModelError("relation " + gen + " has the wrong number of slots");
    }
    for (const Slot& s : arch.inputs()) {
      const SlotRelation* sr = rel.find(s.label);
      if (!sr) throw ModelError("relation " + gen + " misses slot " + s.label);
      if (sr->input_modes != M.modes(s.boundary.name()).ids()) {
        throw ModelError("relation " + gen + "." + s.label + " does not use the modes of " +
                         s.boundary.name());
      }
    }
  }
}

namespace {

ModeRelation ordered_relation(const OperadPresentation& p, const ModeFunctor& M,
                              const std::string& gen) {
  const Architecture& arch = p.generator(gen);
  const ModeRelation& rel = M.relation(gen);
  ModeRelation out{rel.output_modes, {}};
  for (const Slot& s : arch.inputs()) {
    const SlotRelation* sr = rel.find(s.label);
    if (!sr) throw ModelError("relation " + gen + " misses slot " + s.label);
    out.slots.push_back(*sr);
  }
  return out;
}

}  // namespace

ModeRelation evaluate(const OperadPresentation& p, const ModeFunctor& M, const Term& term) {
  ModeRelation rel = ordered_relation(p, M, term.generator);
  std::map<std::string, ModeRelation> inners;
  for (const Term& c : term.children) inners.emplace(c.slot, evaluate(p, M, c));
  return compose_rel(rel, inners);
}

bool ModeCheckReport::passed() const {
  return std::all_of(equations.begin(), equations.end(),
                     [](const ModeEquationResult& r) { return r.passed; });
}

ModeCheckReport check_mode_functor(const OperadPresentation& p, const ModeFunctor& M) {
  check_shape(p, M);
  ModeCheckReport report;
  report.functor = M.name();
  for (std::size_t i = 0; i < p.equations().size(); ++i) {
    const CoherenceEquation& e = p.equations()[i];
    ModeEquationResult result;
    result.equation = i;
    result.lhs = to_string(e.lhs);
    result.rhs = to_string(e.rhs);
    ModeRelation left = evaluate(p, M, e.lhs);
    ModeRelation right = evaluate(p, M, e.rhs);
    for (const SlotRelation& l : left.slots) {
      auto target = e.corr.map(l.slot);
      const SlotRelation* r = target ? right.find(*target) : nullptr;
      if (!r) throw ModelError("equation correspondence misses leaf " + l.slot);
      for (const auto& [z, x] : l.pairs) {
        if (!r->pairs.count({z, x})) result.only_lhs.push_back(l.slot + ": " + z + " -> " + x);
      }
      for (const auto& [z, x] : r->pairs) {
        if (!l.pairs.count({z, x})) result.only_rhs.push_back(l.slot + ": " + z + " -> " + x);
      }
    }
    result.passed = result.only_lhs.empty() && result.only_rhs.empty();
    report.equations.push_back(std::move(result));
  }
  return report;
}

bool can_cause(const OperadPresentation& p, const ModeFunctor& M, const Term& term,
               std::string_view leaf, std::string_view leaf_mode, std::string_view root_mode) {
  Leaf found = find_leaf(p, term, leaf);
  const ModeSet& leaf_modes = M.modes(found.boundary);
  const ModeSet& root_modes = M.modes(output_boundary(p, term));
  if (!leaf_modes.contains(leaf_mode)) {
    throw ModelError("unknown mode " + std::string(leaf_mode) + " on " + found.boundary);
  }
  if (!root_modes.contains(root_mode)) {
    throw ModelError("unknown mode " + std::string(root_mode) + " on " + root_modes.boundary());
  }
  if (found.path.empty()) return leaf_mode == root_mode;
  ModeRelation rel = evaluate(p, M, term);
  const SlotRelation* slot = rel.find(found.path);
  return slot && slot->pairs.count({std::string(leaf_mode), std::string(root_mode)}) > 0;
}

}  // namespace opm
