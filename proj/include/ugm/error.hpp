#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ugm {

enum class ErrorCode {
  EmptyName,
  DuplicateName,
  DanglingReference,
  RefinementCycle,
  UnknownGoal,
  UnknownObstacle,
  UnknownPersona,
  UnknownReference,
  InvalidEnum,
  IncompleteRow,
  ParseError,
  OutOfRange,
  Io,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyName: return "EmptyName";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::RefinementCycle: return "RefinementCycle";
    case ErrorCode::UnknownGoal: return "UnknownGoal";
    case ErrorCode::UnknownObstacle: return "UnknownObstacle";
    case ErrorCode::UnknownPersona: return "UnknownPersona";
    case ErrorCode::UnknownReference: return "UnknownReference";
    case ErrorCode::InvalidEnum: return "InvalidEnum";
    case ErrorCode::IncompleteRow: return "IncompleteRow";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Library-wide exception. `where()` locates the problem: a line/column for
/// text input, a row number for workbook sheets, a JSON pointer for document
/// fields, or an entity name for model errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string where = {})
      : std::runtime_error(compose(code, message, where)),
        code_(code),
        where_(std::move(where)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& where() const noexcept { return where_; }

 private:
  static std::string compose(ErrorCode code, const std::string& message,
                             const std::string& where) {
    std::string out(to_string(code));
    if (!where.empty()) out += " at " + where;
    out += ": " + message;
    return out;
  }

  ErrorCode code_;
  std::string where_;
};

}  // namespace ugm
