// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "opm/presentation.hpp"

namespace opm {

struct FailureMode {
  std::string id;
  /// Optional human-readable requirement violation, e.g. `T_laser < 19.98 C`.
  std::string predicate;

  friend bool operator==(const FailureMode&, const FailureMode&) = default;
};

/// The failure modes attached to one boundary.
class ModeSet {
 public:
  ModeSet() = default;
  /// Throws ModelError on duplicate mode ids.
  ModeSet(std::string boundary, std::vector<FailureMode> modes);

  const std::string& boundary() const { return boundary_; }
  const std::vector<FailureMode>& modes() const { return modes_; }
  std::vector<std::string> ids() const;
  bool contains(std::string_view id) const;

  friend bool operator==(const ModeSet&, const ModeSet&) = default;

 private:
  std::string boundary_;
  std::vector<FailureMode> modes_;
};

/// Pairs (input mode, output mode): "the input mode can cause the output mode".
using CausePairs = std::set<std::pair<std::string, std::string>>;

struct SlotRelation {
  std::string slot;
  std::vector<std::string> input_modes;
  CausePairs pairs;

  friend bool operator==(const SlotRelation&, const SlotRelation&) = default;
};

/// A family of relations R_i ⊆ X_i × Y, one per input slot.
struct ModeRelation {
  std::vector<std::string> output_modes;
  std::vector<SlotRelation> slots;

  const SlotRelation* find(std::string_view slot) const;

  friend bool operator==(const ModeRelation&, const ModeRelation&) = default;
};

/// The identity relation on `modes`, with one slot carrying the empty label.
ModeRelation identity_relation(const std::vector<std::string>& modes);

/// Relational composition: (z, x) is in slot i.j of the result iff some
/// intermediate y has (z, y) in inner_i's slot j and (y, x) in outer's slot i.
/// Throws ModelError when an inner relation's output modes differ from the
/// outer slot's input modes.
ModeRelation compose_rel(const ModeRelation& outer,
                         const std::map<std::string, ModeRelation>& inners);

/// Mode sets per boundary and a "can cause" relation per generator.
class ModeFunctor {
 public:
  ModeFunctor() = default;
  explicit ModeFunctor(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  void add_mode_set(ModeSet set);
  void set_relation(std::string generator, ModeRelation relation);

  const std::map<std::string, ModeSet>& mode_sets() const { return mode_sets_; }
  const std::map<std::string, ModeRelation>& relations() const { return relations_; }
  /// Throw ModelError when missing.
  const ModeSet& modes(std::string_view boundary) const;
  const ModeRelation& relation(std::string_view generator) const;

  friend bool operator==(const ModeFunctor&, const ModeFunctor&) = default;

 private:
  std::string name_;
  std::map<std::string, ModeSet> mode_sets_;
  std::map<std::string, ModeRelation> relations_;
};

/// Builds a relation for `generator` whose mode lists come from M's mode
/// sets; throws ModelError on unknown modes or slots.
ModeRelation make_relation(const OperadPresentation& p, const ModeFunctor& M,
                           std::string_view generator,
                           const std::vector<std::tuple<std::string, std::string, std::string>>& pairs);

/// Throws ModelError unless M is total and every relation is shaped by the
/// mode sets of its generator's boundaries.
void check_shape(const OperadPresentation& p, const ModeFunctor& M);

/// Composite relation from the term's leaves to its output modes.
ModeRelation evaluate(const OperadPresentation& p, const ModeFunctor& M, const Term& term);

struct ModeEquationResult {
  std::size_t equation = 0;
  std::string lhs;
  std::string rhs;
  bool passed = false;
  /// `leaf: z -> x` pairs present on one side only (named by lhs leaf path).
  std::vector<std::string> only_lhs;
  std::vector<std::string> only_rhs;
};

struct ModeCheckReport {
  std::string functor;
  std::vector<ModeEquationResult> equations;

  bool passed() const;
};

ModeCheckReport check_mode_functor(const OperadPresentation& p, const ModeFunctor& M);

/// Whether `leaf_mode` at `leaf` can cause `root_mode` at the term's output.
/// The empty leaf names the root itself (identity relation).
bool can_cause(const OperadPresentation& p, const ModeFunctor& M, const Term& term,
               std::string_view leaf, std::string_view leaf_mode, std::string_view root_mode);

}  // namespace opm
