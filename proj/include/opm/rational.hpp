// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace opm {

using Rational = boost::multiprecision::cpp_rational;

/// Parses `a/b`, an integer, or a finite decimal (`21.4`, `-0.125`) into an
/// exact rational. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// `3/14`, `1`, `0`, `-1/2`.
std::string to_string(const Rational& value);

/// Percentage rounded half-up to one decimal place, trailing `.0` dropped:
/// 12/25 -> "48%", 3/14 -> "21.4%".
std::string to_percent(const Rational& value);

double to_double(const Rational& value);

Rational abs(const Rational& value);

/// An exact probability in [0, 1].
class Probability {
 public:
  Probability() = default;
  /// Throws std::invalid_argument when the value lies outside [0, 1].
  explicit Probability(Rational value);

  static Probability parse(std::string_view text) {
    return Probability(parse_rational(text));
  }

  const Rational& value() const { return value_; }

  friend bool operator==(const Probability&, const Probability&) = default;

 private:
  Rational value_{0};
};

inline std::string to_string(const Probability& p) { return to_string(p.value()); }

}  // namespace opm
