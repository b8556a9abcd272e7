#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace skelpair {

enum class ErrorKind {
  // input validation
  SelfLoop,
  ParallelEdge,
  UnknownVertex,
  DuplicateVertex,
  EmptyGraph,
  InvalidArgument,
  SchemaError,
  GluingMismatch,
  SyntaxError,
  UnknownIdentifier,
  ArityMismatch,
  SmoothnessClassMismatch,
  IOError,
  // computation
  NotInner,
  TooLarge,
  DegreeMismatch,
  LevelMismatch,
  InconsistentRelations,
  Underdetermined,
  EvalError,
  OutOfRange,
  DegenerateRadius,
  VanishingConditionUnverified,
};

std::string_view to_string(ErrorKind kind);

/// True for errors caused by malformed user input (CLI exit code 3);
/// everything else is a computation error (exit code 4).
bool is_input_error(ErrorKind kind);

/// Base exception of the library. `detail` carries machine-readable fields
/// (offending vertex, parse position, ...) that the CLI forwards as JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::map<std::string, std::string> detail = {})
      : std::runtime_error(message), kind_(kind), detail_(std::move(detail)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::map<std::string, std::string>& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::map<std::string, std::string> detail_;
};

}  // namespace skelpair
