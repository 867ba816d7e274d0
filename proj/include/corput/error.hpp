#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corput {

enum class ErrorKind {
  invalid_argument,
  evaluation_failure,
  catalog_miss,
  unsupported_order,
  precision_failure,
  budget_exhausted,
  singularity,
  noise_floor,
  degenerate_fit,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind is the
/// stable part of the contract; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace corput
