// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opm {

/// Raised for malformed models: bad references, ill-typed wiring, shape
/// mismatches between functor data and the presentation.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
};

/// A model error tied to a position in `.opm` source text.
class ParseError : public ModelError {
 public:
  ParseError(SourceLocation where, const std::string& message)
      : ModelError(std::to_string(where.line) + ":" +
                   std::to_string(where.column) + ": " + message),
        where_(where),
        detail_(message) {}

  SourceLocation where() const { return where_; }
  const std::string& detail() const { return detail_; }

 private:
  SourceLocation where_;
  std::string detail_;
};

}  // namespace opm
