#pragma once

#include <stdexcept>
#include <string>

namespace period_balance {

enum class ErrorKind {
  parse,
  domain,
  energy_out_of_range,
  annulus,
  convergence,
  unsupported,
  no_real_solution,
  consistency,
  inconclusive,
  ill_conditioned,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace period_balance
