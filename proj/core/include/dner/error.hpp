#ifndef DNER_ERROR_HPP
#define DNER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dner {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& msg) : Error(msg) {}
};

// Malformed input file.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, std::size_t line, const std::string& msg)
      : Error(where + ":" + std::to_string(line) + ": " + msg),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input data is inconsistent (dangling references, mismatched keys, ...).
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

// The requested encoding cannot represent the input.
class SchemaLimitationError : public Error {
 public:
  explicit SchemaLimitationError(const std::string& msg) : Error(msg) {}
};

// Input exceeds a hard size bound of an exhaustive procedure.
class SizeLimitError : public Error {
 public:
  explicit SizeLimitError(const std::string& msg) : Error(msg) {}
};

}  // namespace dner

#endif
