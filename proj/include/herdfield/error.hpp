#pragma once

#include <stdexcept>
#include <string>

namespace herdfield {

/// Failure category; the CLI maps each to its own exit status.
enum class ErrorKind { config, convergence, io, solver };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace herdfield
