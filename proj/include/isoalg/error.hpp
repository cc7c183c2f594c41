#ifndef ISOALG_ERROR_HPP
#define ISOALG_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace isoalg {

enum class ErrorKind {
  DescriptorMismatch,
  DivisionByZero,
  NonInvertibleElement,
  NotAnExtension,
  InvalidField,
  ParseError,
  IndexOutOfRange,
  DuplicateLabel,
  DimensionMismatch,
  FieldMismatch,
  NotAGroup,
  DanglingEdge,
  DuplicateEdgeName,
  XNotRegular,
  NotAcyclic,
  NotAnIdeal,
  SingularCandidate,
  FieldTooLarge,
  Io,
};

inline std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DescriptorMismatch: return "DescriptorMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NonInvertibleElement: return "NonInvertibleElement";
    case ErrorKind::NotAnExtension: return "NotAnExtension";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::NotAGroup: return "NotAGroup";
    case ErrorKind::DanglingEdge: return "DanglingEdge";
    case ErrorKind::DuplicateEdgeName: return "DuplicateEdgeName";
    case ErrorKind::XNotRegular: return "XNotRegular";
    case ErrorKind::NotAcyclic: return "NotAcyclic";
    case ErrorKind::NotAnIdeal: return "NotAnIdeal";
    case ErrorKind::SingularCandidate: return "SingularCandidate";
    case ErrorKind::FieldTooLarge: return "FieldTooLarge";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace isoalg

#endif  // ISOALG_ERROR_HPP
