#pragma once

#include <stdexcept>
#include <string>

namespace specclass {

// Error category, used by the CLI to pick an exit code.
enum class ErrorKind {
  Validation = 3,  // bad inputs, schema violations, mismatched grids
  Numeric = 4,     // non-finite intermediate results
  Io = 5,          // filesystem failures
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

private:
  ErrorKind kind_;
};

struct EmptySpectrum : Error {
  explicit EmptySpectrum(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct InsufficientCounts : Error {
  explicit InsufficientCounts(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct GridError : Error {
  explicit GridError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct GridMismatch : Error {
  explicit GridMismatch(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct EmptyLibrary : Error {
  explicit EmptyLibrary(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct UnknownLabel : Error {
  explicit UnknownLabel(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct ValueError : Error {
  explicit ValueError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct VersionError : Error {
  explicit VersionError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct NonFiniteDensity : Error {
  explicit NonFiniteDensity(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace specclass
