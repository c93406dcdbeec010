#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sbc {

// Position in a source text, 1-based. Locations never take part in
// structural equality of the values that carry them.
struct SourceLoc {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

std::string to_string(const SourceLoc& loc);

enum class Severity { Error, Warning };

struct Diagnostic {
  SourceLoc loc;
  Severity severity = Severity::Error;
  std::string rule;  // short machine-readable tag, e.g. "single-initial"
  std::string message;
};

bool has_errors(const std::vector<Diagnostic>& diags);

class SbcError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public SbcError {
public:
  ParseError(SourceLoc loc, const std::string& message)
      : SbcError(message), loc_(loc) {}
  const SourceLoc& loc() const { return loc_; }

private:
  SourceLoc loc_;
};

class ReferenceError : public SbcError {
public:
  using SbcError::SbcError;
};

class EvalError : public SbcError {
public:
  using SbcError::SbcError;
};

class SimulationError : public SbcError {
public:
  using SbcError::SbcError;
};

class StateSpaceError : public SbcError {
public:
  using SbcError::SbcError;
};

}  // namespace sbc
