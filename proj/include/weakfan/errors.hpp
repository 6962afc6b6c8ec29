#pragma once

#include <stdexcept>
#include <string>

namespace weakfan {

// Inputs whose shape/type is wrong (dimension mismatch, malformed data).
struct InputShapeError : std::runtime_error {
  explicit InputShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input violating a mathematical precondition.
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotNilpotentError : DomainError {
  explicit NotNilpotentError(const std::string& msg) : DomainError(msg) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace weakfan
