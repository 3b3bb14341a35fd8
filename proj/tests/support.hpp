// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test binaries: corpus access and seeded random
// generators for the property suites.

#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "opm/dsl.hpp"

namespace opm::testing {

inline std::string corpus_path() { return std::string(OPM_CORPUS_DIR) + "/lsi.opm"; }
inline std::string fixture_path(const std::string& name) {
  return std::string(OPM_FIXTURE_DIR) + "/" + name;
}

const Model& corpus();

class Rng {
 public:
  explicit Rng(unsigned seed) : engine_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(uniform(0, static_cast<int>(xs.size()) - 1))];
  }

 private:
  std::mt19937 engine_;
};

/// Random nonnegative weights normalized to one; at least one entry positive.
/// With `positive` every entry is positive.
std::vector<Rational> random_simplex(Rng& rng, std::size_t n, bool positive = false);

Distribution random_distribution(Rng& rng, const std::vector<std::string>& labels,
                                 bool positive = false);

// ---- port graphs

/// A pool of boundaries over the types a, b, c.
std::vector<Boundary> random_boundaries(Rng& rng, std::size_t count);

/// A valid architecture with `arity` slots labelled s0.. drawn from `pool`,
/// wiring each type's ports in a random partition.
Architecture random_architecture(Rng& rng, const std::vector<Boundary>& pool,
                                 const Boundary& output, std::size_t arity);

/// A random valid wiring for the given slots and output.
Architecture random_wiring(Rng& rng, std::vector<Slot> slots, const Boundary& output);

/// Canonical blocks as sets of `slot.port` / `out.port` strings.
std::set<std::set<std::string>> blocks(const Architecture& arch);

/// A copy of `p` with generator `name` replaced by `arch`.
OperadPresentation with_generator(const OperadPresentation& p, const std::string& name,
                                  const Architecture& arch);

/// A committed composite: output boundary, (slot, boundary) list and blocks.
struct ArchFixture {
  std::string output;
  std::vector<std::pair<std::string, std::string>> slots;
  std::set<std::set<std::string>> blocks;
};
ArchFixture read_fixture(const std::string& name);

// ---- mode relations and kernels

std::vector<std::string> mode_names(const std::string& prefix, std::size_t n);

/// Random relation with output modes `out` and one slot per (label, modes).
ModeRelation random_relation(Rng& rng, const std::vector<std::string>& out,
                             const std::vector<std::pair<std::string, std::vector<std::string>>>& slots,
                             double density = 0.4);

/// Random row-stochastic kernel.
Kernel random_kernel(Rng& rng, const std::vector<std::string>& source,
                     const std::vector<KernelTarget>& targets, bool sparse = true);

/// The aggr-consistent construction: given a kernel and a source prior whose
/// slots all receive mass, derive slot priors s_i(y) = Σ_x r(x)p(x↦(i,y)) / |p|(i)
/// so that the pt condition holds.
PtKernel consistent_pt(const Kernel& k, const Distribution& source_prior);

/// `k` with entry (x, t, y) set to zero and the row renormalized; when the
/// entry carried the whole row, its mass moves to the row's first other column.
PtKernel zero_entry(const PtKernel& k, std::size_t x, std::size_t t, std::size_t y);

}  // namespace opm::testing
