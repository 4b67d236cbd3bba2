#ifndef SPINAL_ERRORS_HPP
#define SPINAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spinal {

enum class ErrorKind {
  BudgetExceeded,
  Parse,
  UnknownGenerator,
  NotProper,
  LabelOutOfRange,
  InvalidPath,
  NotCompatible,
  NotPrimaryCyclic,
  MissingLayeredCertificate,
  DepthExceeded,
  UnknownEntry,
  ParamOutOfRange,
  Input
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline const char *error_kind_name(ErrorKind k) {
  switch (k) {
  case ErrorKind::BudgetExceeded: return "BudgetExceeded";
  case ErrorKind::Parse: return "ParseError";
  case ErrorKind::UnknownGenerator: return "UnknownGenerator";
  case ErrorKind::NotProper: return "NotProper";
  case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
  case ErrorKind::InvalidPath: return "InvalidPath";
  case ErrorKind::NotCompatible: return "NotCompatible";
  case ErrorKind::NotPrimaryCyclic: return "NotPrimaryCyclic";
  case ErrorKind::MissingLayeredCertificate: return "MissingLayeredCertificate";
  case ErrorKind::DepthExceeded: return "DepthExceeded";
  case ErrorKind::UnknownEntry: return "UnknownEntry";
  case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
  case ErrorKind::Input: return "InputError";
  }
  return "Error";
}

} // namespace spinal

#endif // SPINAL_ERRORS_HPP
