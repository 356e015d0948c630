#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cournot {

enum class ErrorKind {
  domain,      // argument outside the function's domain (e.g. negative quantity)
  model,       // model violates a standing assumption (no root, bad parameters)
  partition,   // N not divisible by K
  mode,        // operation not available for this capacity mode
  assumption,  // equilibrium first-order condition could not be bracketed
  dimension,   // vector length mismatch
  fit,         // regression had too few usable points
  input,       // mismatched or malformed inputs to an experiment
  config,      // configuration document rejected
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base class for every error the library raises. The kind is machine
/// readable and is what the CLI prints in its diagnostic line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

}  // namespace cournot
