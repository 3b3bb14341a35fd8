// SPDX-License-Identifier: Apache-2.0

#include "opm/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace opm {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

cpp_int parse_integer(std::string_view s) {
  cpp_int out = 0;
  for (char c : s) out = out * 10 + (c - '0');
  return out;
}

cpp_int pow10(std::size_t n) {
  cpp_int out = 1;
  for (std::size_t i = 0; i < n; ++i) out *= 10;
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string original(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational out;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw std::invalid_argument("malformed rational '" + original + "'");
    }
    cpp_int d = parse_integer(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + original + "'");
    out = Rational(parse_integer(num), d);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) {
      throw std::invalid_argument("malformed decimal '" + original + "'");
    }
    cpp_int w = whole.empty() ? cpp_int(0) : parse_integer(whole);
    cpp_int scale = pow10(frac.size());
    out = Rational(w * scale + parse_integer(frac), scale);
  } else {
    if (!all_digits(text)) {
      throw std::invalid_argument("malformed number '" + original + "'");
    }
    out = Rational(parse_integer(text));
  }
  return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& value) {
  auto num = boost::multiprecision::numerator(value);
  auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_percent(const Rational& value) {
  // tenths of a percent, rounded half away from zero
  Rational scaled = value * 1000;
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  cpp_int num = boost::multiprecision::numerator(scaled);
  cpp_int den = boost::multiprecision::denominator(scaled);
  cpp_int tenths = (2 * num + den) / (2 * den);
  cpp_int whole = tenths / 10;
  cpp_int frac = tenths % 10;
  std::string out = negative && tenths != 0 ? "-" : "";
  out += whole.str();
  if (frac != 0) out += "." + frac.str();
  return out + "%";
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

Probability::Probability(Rational value) : value_(std::move(value)) {
  if (value_ < 0 || value_ > 1) {
    throw std::invalid_argument("probability " + to_string(value_) +
                                " outside [0, 1]");
  }
}

}  // namespace opm
