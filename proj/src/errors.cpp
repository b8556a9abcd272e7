#include "skelpair/errors.hpp"

namespace skelpair {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::ParallelEdge: return "ParallelEdge";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::DuplicateVertex: return "DuplicateVertex";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::GluingMismatch: return "GluingMismatch";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::SmoothnessClassMismatch: return "SmoothnessClassMismatch";
    case ErrorKind::IOError: return "IOError";
    case ErrorKind::NotInner: return "NotInner";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::LevelMismatch: return "LevelMismatch";
    case ErrorKind::InconsistentRelations: return "InconsistentRelations";
    case ErrorKind::Underdetermined: return "Underdetermined";
    case ErrorKind::EvalError: return "EvalError";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DegenerateRadius: return "DegenerateRadius";
    case ErrorKind::VanishingConditionUnverified: return "VanishingConditionUnverified";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SelfLoop:
    case ErrorKind::ParallelEdge:
    case ErrorKind::UnknownVertex:
    case ErrorKind::DuplicateVertex:
    case ErrorKind::EmptyGraph:
    case ErrorKind::InvalidArgument:
    case ErrorKind::SchemaError:
    case ErrorKind::GluingMismatch:
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::ArityMismatch:
    case ErrorKind::SmoothnessClassMismatch:
    case ErrorKind::IOError:
      return true;
    default:
      return false;
  }
}

}  // namespace skelpair
