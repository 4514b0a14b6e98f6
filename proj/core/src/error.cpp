#include "sessbot/error.hpp"

namespace sessbot {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Io: return "I/O error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ParseError::ParseError(std::size_t byte_offset, const std::string& message)
    : Error(ErrorKind::Parse, "at byte " + std::to_string(byte_offset) + ": " + message),
      byte_offset_(byte_offset) {}

SchemaError::SchemaError(std::string field)
    : Error(ErrorKind::Schema, "missing or mistyped field '" + field + "'"),
      field_(std::move(field)) {}

}  // namespace sessbot
