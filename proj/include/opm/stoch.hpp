// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "opm/modes.hpp"
#include "opm/prob.hpp"
#include "opm/rational.hpp"

namespace opm {

struct KernelTarget {
  std::string slot;
  std::vector<std::string> modes;

  friend bool operator==(const KernelTarget&, const KernelTarget&) = default;
};

/// A stochastic kernel X ⤳ ⊔_i Y_i, stored in the diagnosis direction:
/// each source mode carries a distribution over (slot, mode) columns.
class Kernel {
 public:
  Kernel() = default;
  /// `rows[x]` holds one entry per column, columns ordered slot by slot.
  /// Throws ModelError on shape mismatch, entries outside [0, 1], or a row
  /// that does not sum to one.
  Kernel(std::vector<std::string> source, std::vector<KernelTarget> targets,
         std::vector<std::vector<Rational>> rows);

  const std::vector<std::string>& source() const { return source_; }
  const std::vector<KernelTarget>& targets() const { return targets_; }
  const std::vector<std::vector<Rational>>& rows() const { return rows_; }

  std::size_t columns() const;
  /// First column of target `t`.
  std::size_t offset(std::size_t t) const;
  const Rational& at(std::size_t x, std::size_t t, std::size_t y) const;
  /// Throws ModelError on unknown names.
  const Rational& at(std::string_view x, std::string_view slot, std::string_view y) const;

  std::size_t source_index(std::string_view mode) const;
  std::size_t target_index(std::string_view slot) const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  std::vector<std::string> source_;
  std::vector<KernelTarget> targets_;
  std::vector<std::vector<Rational>> rows_;
};

/// Identity kernel on `modes`, with one target carrying the empty label.
Kernel identity_kernel(const std::vector<std::string>& modes);

/// Marginalization: (x ↦ (i.j, z)) = Σ_y p(x ↦ (i, y)) · q_i(y ↦ (j, z)).
/// Slots absent from `qs` are kept as they are.
Kernel compose_kernel(const Kernel& p, const std::map<std::string, Kernel>& qs);

/// Support read as "can cause": (y at slot i, x) for every positive entry.
ModeRelation supp(const Kernel& k);

/// A kernel together with a prior on its source and a prior per slot.
struct PtKernel {
  Kernel kernel;
  Distribution source_prior;
  std::vector<Distribution> slot_priors;

  friend bool operator==(const PtKernel&, const PtKernel&) = default;
};

/// Throws ModelError when prior labels do not match the kernel's mode lists.
PtKernel make_pt_kernel(Kernel kernel, Distribution source_prior,
                        std::vector<Distribution> slot_priors);

struct PtResidual {
  std::string slot;
  std::string mode;
  Rational weighted;  // Σ_x r(x) p(x ↦ (i, y))
  Rational expected;  // |p|(i) · s_i(y)
  Rational residual;
};

struct PtConditionReport {
  bool holds = false;
  Rational max_residual;
  std::vector<PtResidual> violations;
  /// Slots whose aggregate mass is zero.
  std::vector<std::string> empty_slots;
};

/// Checks Σ_x r(x) p(x ↦ (i, y)) = |p|(i) · s_i(y) entrywise within tolerance
/// and that every slot has positive aggregate mass.
PtConditionReport pt_condition(const PtKernel& k, const Rational& tolerance = 0);

/// |p|(i) = Σ_x Σ_{y ∈ Y_i} r(x) p(x ↦ (i, y)), labelled by slot.
Distribution aggr(const PtKernel& k);

/// Composes kernels and carries priors along. Each inner source prior must
/// equal the outer slot prior it replaces.
PtKernel compose_pt(const PtKernel& outer, const std::map<std::string, PtKernel>& inners);

/// Boundary priors plus a pointed kernel per generator.
class StochFunctor {
 public:
  StochFunctor() = default;
  explicit StochFunctor(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  void set_prior(std::string boundary, Distribution prior);
  void set_kernel(std::string generator, PtKernel kernel);

  const std::map<std::string, Distribution>& priors() const { return priors_; }
  const std::map<std::string, PtKernel>& kernels() const { return kernels_; }
  const Distribution& prior(std::string_view boundary) const;
  const PtKernel& kernel(std::string_view generator) const;

  friend bool operator==(const StochFunctor&, const StochFunctor&) = default;

 private:
  std::string name_;
  std::map<std::string, Distribution> priors_;
  std::map<std::string, PtKernel> kernels_;
};

/// Assembles the pointed kernel of `generator` from boundary priors and
/// sparse entries (source mode, slot, target mode, value); absent entries are
/// zero.
PtKernel make_generator_kernel(
    const OperadPresentation& p, const StochFunctor& S, std::string_view generator,
    const std::vector<std::tuple<std::string, std::string, std::string, Rational>>& entries);

/// Composite pointed kernel over the term's leaves.
PtKernel evaluate(const OperadPresentation& p, const StochFunctor& S, const Term& term);

struct GeneratorLifting {
  std::string generator;
  PtConditionReport pt;
  bool aggr_ok = false;
  std::string aggr_value;
  bool supp_ok = false;
  /// `slot: y -> x` pairs in the kernel's support but not in M, and vice versa.
  std::vector<std::string> only_kernel;
  std::vector<std::string> only_relation;
  std::vector<std::string> problems;

  bool passed() const { return pt.holds && aggr_ok && supp_ok && problems.empty(); }
};

struct EquationLifting {
  std::size_t equation = 0;
  std::string lhs;
  std::string rhs;
  bool kernel_ok = false;
  bool priors_ok = false;
  bool aggr_ok = false;
  bool supp_ok = false;
  Rational max_difference;
  std::vector<std::string> differences;

  bool passed() const { return kernel_ok && priors_ok; }
};

struct LiftingReport {
  std::string stoch;
  std::string prob;
  std::string modes;
  std::vector<std::string> problems;
  std::vector<GeneratorLifting> generators;
  std::vector<EquationLifting> equations;

  bool passed() const;
};

/// Per generator: pt_condition, aggr(S g) = P g, supp(S g) = M g. Per
/// equation: both composites agree entrywise after leaf alignment.
LiftingReport check_lifting(const OperadPresentation& p, const StochFunctor& S,
                            const ProbFunctor& P, const ModeFunctor& M,
                            const Rational& tolerance = 0);

/// Chain-rule posterior over (leaf, leaf mode) given the observed root mode:
/// the composite kernel's row. Labels read `leaf:mode`. Throws ModelError
/// ("unsupported observation") when the observed mode has zero prior mass.
Distribution diagnose(const OperadPresentation& p, const StochFunctor& S, const Term& term,
                      std::string_view observed_mode);

}  // namespace opm
