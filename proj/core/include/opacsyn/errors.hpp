#pragma once

#include <stdexcept>
#include <string>

namespace opacsyn {

/// Malformed input text; line is 1-based, 0 when unknown.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg
                                     : msg),
        line(line_) {}
};

/// Well-formed input that violates a model-level rule (unknown identifier,
/// nondeterminism, duplicate declaration, ...).
struct SemanticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A configured resource cap was exceeded (state budgets, enumeration caps).
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace opacsyn
