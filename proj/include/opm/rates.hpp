// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opm/presentation.hpp"
#include "opm/prob.hpp"
#include "opm/rational.hpp"

namespace opm {

/// Mean time between failures in a fixed unit: a value in (0, ∞].
class MeanTime {
 public:
  /// Throws std::invalid_argument unless value > 0.
  explicit MeanTime(Rational value);
  static MeanTime infinite() { return MeanTime(); }

  bool is_infinite() const { return !value_; }
  /// Throws std::logic_error when infinite.
  const Rational& value() const;

  friend bool operator==(const MeanTime&, const MeanTime&) = default;

 private:
  MeanTime() = default;
  std::optional<Rational> value_;
};

/// A constant failure rate in [0, ∞).
class Rate {
 public:
  /// Throws std::invalid_argument when negative.
  explicit Rate(Rational value);

  const Rational& value() const { return value_; }

  friend bool operator==(const Rate&, const Rate&) = default;

 private:
  Rational value_;
};

std::string to_string(const MeanTime& t);

Rate invert(const MeanTime& t);
MeanTime invert(const Rate& r);

/// Mean time of independent failure sources: (Σ t_i⁻¹)⁻¹, with ∞ contributing
/// nothing. Throws std::invalid_argument on an empty list.
MeanTime combine_meantime(std::span<const MeanTime> times);

/// λ_i / Σλ labelled as given. Throws ModelError("zero total rate").
Distribution normalize(const std::vector<std::pair<std::string, Rate>>& rates);

/// Failures observed over [start, end].
class FailureHistory {
 public:
  /// Throws ModelError unless start < end and every timestamp lies within.
  FailureHistory(Rational start, Rational end, std::vector<Rational> timestamps);

  const Rational& start() const { return start_; }
  const Rational& end() const { return end_; }
  const std::vector<Rational>& timestamps() const { return timestamps_; }

  friend bool operator==(const FailureHistory&, const FailureHistory&) = default;

 private:
  Rational start_;
  Rational end_;
  std::vector<Rational> timestamps_;
};

/// (end - start) / |F|, or ∞ with no failures.
MeanTime history_stats(const FailureHistory& h);

/// Disjoint union of two histories over the same interval.
FailureHistory merge(const FailureHistory& a, const FailureHistory& b);

/// Turns leaf histories of a full decomposition into a ProbFunctor: leaf rates
/// come from the histories, a node's rate is the sum of its children, and each
/// generator gets its children's rates normalized. Histories are keyed by
/// leaf path. With several terms the results are merged; a generator that
/// receives two different distributions is a ModelError.
ProbFunctor pipeline_check(const OperadPresentation& p, const std::vector<Term>& terms,
                           const std::map<std::string, FailureHistory>& histories,
                           std::string name = "rates");

}  // namespace opm
