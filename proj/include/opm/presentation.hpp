// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opm/portgraph.hpp"

namespace opm {

/// A composite of generators, written `gen(slot->child, ...)`. Slots without
/// a child stay open and become leaves.
struct Term {
  std::string generator;
  /// The parent slot this subterm fills; empty at the root.
  std::string slot;
  std::vector<Term> children;

  static Term leaf(std::string generator) { return Term{std::move(generator), {}, {}}; }

  const Term* child(std::string_view slot_label) const;
  Term& with(std::string slot_label, Term child);
};

/// Structural equality; child order is irrelevant.
bool operator==(const Term& a, const Term& b);

std::string to_string(const Term& term);

struct CoherenceEquation {
  Term lhs;
  Term rhs;
  /// Pairs lhs leaf paths with rhs leaf paths.
  ComponentCorrespondence corr;

  friend bool operator==(const CoherenceEquation&, const CoherenceEquation&) = default;
};

/// Named boundaries, generator architectures and coherence equations.
/// Only name uniqueness is enforced on insertion; compile() checks the rest.
class OperadPresentation {
 public:
  TypeTable& types() { return types_; }
  const TypeTable& types() const { return types_; }

  void add_boundary(Boundary boundary);
  void add_generator(std::string name, Architecture arch);
  void add_equation(CoherenceEquation equation);

  const std::vector<Boundary>& boundaries() const { return boundaries_; }
  const std::vector<std::pair<std::string, Architecture>>& generators() const {
    return generators_;
  }
  const std::vector<CoherenceEquation>& equations() const { return equations_; }

  const Boundary* find_boundary(std::string_view name) const;
  const Architecture* find_generator(std::string_view name) const;
  /// Throws ModelError for an unknown generator.
  const Architecture& generator(std::string_view name) const;

  friend bool operator==(const OperadPresentation&, const OperadPresentation&) = default;

 private:
  TypeTable types_;
  std::vector<Boundary> boundaries_;
  std::vector<std::pair<std::string, Architecture>> generators_;
  std::vector<CoherenceEquation> equations_;
};

struct PathStep {
  std::string generator;
  std::string slot;
};

/// An open slot of a term, with the generators/slots passed on the way down.
struct Leaf {
  std::string path;
  std::string boundary;
  std::vector<PathStep> route;
};

/// Open slots of `term` in left-to-right slot order. Throws ModelError on an
/// unknown generator or slot, or when a child's output boundary does not
/// match the slot it fills.
std::vector<Leaf> leaves(const OperadPresentation& p, const Term& term);

/// Finds a leaf by full path or by a unique dotted suffix (`ba` matches
/// `ts.ba`). The empty query names the root itself (empty route). Throws
/// ModelError when absent or ambiguous.
Leaf find_leaf(const OperadPresentation& p, const Term& term, std::string_view query);

/// Output boundary name of the term's root generator.
std::string output_boundary(const OperadPresentation& p, const Term& term);

/// Grafts `scion` onto the open leaf `leaf_path` of `host`.
Term graft(const Term& host, std::string_view leaf_path, const Term& scion);

/// Folds compose over the term tree.
Architecture elaborate(const OperadPresentation& p, const Term& term);

/// Matches leaves: explicit pairs first, the rest by boundary name. Throws
/// ModelError when a boundary occurs more than once among unmatched leaves.
ComponentCorrespondence derive_correspondence(
    const OperadPresentation& p, const Term& lhs, const Term& rhs,
    const std::vector<std::pair<std::string, std::string>>& explicit_pairs = {});

struct EquationReport {
  std::string lhs;
  std::string rhs;
  bool passed = false;
  /// Set when elaboration or the correspondence failed.
  std::string error;
  EqualityReport comparison;
};

EquationReport check_equation(const OperadPresentation& p, const CoherenceEquation& e);

struct CheckFailure {
  std::string location;
  std::vector<std::string> messages;
};

struct CompileReport {
  std::size_t boundaries = 0;
  std::size_t generators = 0;
  std::size_t equations = 0;
  std::size_t checks = 0;
  std::vector<CheckFailure> failures;
  std::vector<EquationReport> equation_reports;

  bool ok() const { return failures.empty(); }
};

/// Validates boundaries against the type table, generators against their
/// declared boundaries, and checks every equation.
CompileReport compile(const OperadPresentation& p);

}  // namespace opm
