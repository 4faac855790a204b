#pragma once

#include <stdexcept>
#include <string>

namespace qepi {

enum class ErrorKind {
  kSize,
  kWiring,
  kShape,
  kConfig,
  kNumerical,
  kDegenerate,
  kParse,
  kIo,
  kState,
  kValidation,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define QEPI_DEFINE_ERROR(Name, Kind)                                        \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& message) : Error(Kind, message) {}     \
  };

QEPI_DEFINE_ERROR(SizeError, ErrorKind::kSize)
QEPI_DEFINE_ERROR(WiringError, ErrorKind::kWiring)
QEPI_DEFINE_ERROR(ShapeError, ErrorKind::kShape)
QEPI_DEFINE_ERROR(ConfigError, ErrorKind::kConfig)
QEPI_DEFINE_ERROR(NumericalError, ErrorKind::kNumerical)
QEPI_DEFINE_ERROR(DegenerateError, ErrorKind::kDegenerate)
QEPI_DEFINE_ERROR(ParseError, ErrorKind::kParse)
QEPI_DEFINE_ERROR(IoError, ErrorKind::kIo)
QEPI_DEFINE_ERROR(StateError, ErrorKind::kState)
QEPI_DEFINE_ERROR(ValidationError, ErrorKind::kValidation)

#undef QEPI_DEFINE_ERROR

}  // namespace qepi
