// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opm/presentation.hpp"
#include "opm/rational.hpp"

namespace opm {

/// A finite probability distribution over labelled outcomes. Probabilities
/// sum to exactly one.
class Distribution {
 public:
  Distribution() = default;
  /// Throws ModelError on duplicate labels or a total other than one.
  explicit Distribution(std::vector<std::pair<std::string, Probability>> entries);

  /// Point mass on a single label (the empty label by default).
  static Distribution unit(std::string label = {});

  const std::vector<std::pair<std::string, Probability>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::vector<std::string> labels() const;

  bool contains(std::string_view label) const;
  /// Throws ModelError for an unknown label.
  const Probability& at(std::string_view label) const;

  /// Same entries ordered as `labels`; throws ModelError if the label sets differ.
  Distribution reordered(const std::vector<std::string>& labels) const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<std::pair<std::string, Probability>> entries_;
};

std::string to_string(const Distribution& d);

/// Operadic composition p(q_1, ..., q_n): entry (i, j) is p_i * q_ij,
/// labelled `i.j`. Labels absent from `qs` stay as they are.
Distribution compose_dist(const Distribution& p, const std::map<std::string, Distribution>& qs);

/// Assigns each generator a distribution over its slot labels.
class ProbFunctor {
 public:
  ProbFunctor() = default;
  explicit ProbFunctor(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set(std::string generator, Distribution d);
  const std::map<std::string, Distribution>& values() const { return values_; }
  /// Throws ModelError when the generator has no value.
  const Distribution& at(std::string_view generator) const;

  friend bool operator==(const ProbFunctor&, const ProbFunctor&) = default;

 private:
  std::string name_;
  std::map<std::string, Distribution> values_;
};

/// Throws ModelError unless F is total on p's generators with each
/// distribution labelled exactly by that generator's slots.
void check_shape(const OperadPresentation& p, const ProbFunctor& F);

/// Composite distribution over the term's leaves, in leaf order.
Distribution evaluate(const OperadPresentation& p, const ProbFunctor& F, const Term& term);

struct Factor {
  std::string generator;
  std::string slot;
  Rational value;
};

struct ProbRow {
  std::size_t equation = 0;
  std::string lhs_leaf;
  std::string rhs_leaf;
  std::string boundary;
  std::vector<Factor> lhs_factors;
  std::vector<Factor> rhs_factors;
  Rational lhs;
  Rational rhs;
  bool passed = false;
};

struct ProbCheckReport {
  std::string functor;
  Rational tolerance;
  std::vector<ProbRow> rows;

  bool passed() const;
  std::size_t failures() const;
};

/// Composes both sides of every coherence equation under F and compares the
/// aligned leaf entries; |lhs - rhs| <= tolerance passes.
ProbCheckReport check_prob_functor(const OperadPresentation& p, const ProbFunctor& F,
                                   const Probability& tolerance = Probability{});

/// Product of F's entries along the route to `leaf` (see find_leaf).
Probability leaf_probability(const OperadPresentation& p, const ProbFunctor& F, const Term& term,
                             std::string_view leaf);

/// One product-path identity per matched leaf pair of each equation, e.g.
/// `phi(ls)·lambda(in)=kappa(sn)·sigma(in)`.
std::vector<std::string> symbolic_constraints(const OperadPresentation& p);

}  // namespace opm
