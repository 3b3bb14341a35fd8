// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "opm/modes.hpp"
#include "opm/presentation.hpp"
#include "opm/prob.hpp"
#include "opm/rates.hpp"
#include "opm/stoch.hpp"

namespace opm {

/// Everything an `.opm` file declares, with references resolved.
struct Model {
  OperadPresentation presentation;
  std::vector<ProbFunctor> prob;
  std::vector<ModeFunctor> modes;
  std::vector<StochFunctor> stoch;
  /// Keyed by leaf path.
  std::map<std::string, FailureHistory> histories;

  const ProbFunctor* find_prob(std::string_view name) const;
  const ModeFunctor* find_modes(std::string_view name) const;
  const StochFunctor* find_stoch(std::string_view name) const;

  friend bool operator==(const Model&, const Model&) = default;
};

/// Parses `.opm` text. Throws ParseError (with line and column) on syntax
/// errors, unresolved references, and ambiguous auto-exposure. Ill-typed or
/// incomplete wiring is kept as written for compile() to report.
Model parse_model(std::string_view text);

/// Reads and parses a file; throws ModelError when it cannot be read.
Model load_model(const std::filesystem::path& path);

/// Canonical text: fixed item order, canonical wires, explicit matchings,
/// rationals as `a/b`. parse_model(serialize(m)) == m for valid models.
std::string serialize(const Model& model);

/// Parses the term micro-syntax `gen(slot->gen(...), ...)`.
Term parse_term(std::string_view text);

/// Renders an architecture the way the CLI prints composites.
std::string render_architecture(std::string_view name, const Architecture& arch);

}  // namespace opm
