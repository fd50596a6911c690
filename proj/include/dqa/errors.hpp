#pragma once

#include <stdexcept>
#include <string>

namespace dqa {

enum class ErrorKind {
  Config,     // invalid input or inconsistent parameters
  Numerical,  // integrator drift, degenerate spectra, failed invariants
  Oracle,     // fast solver disagrees with the brute-force reference
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

}  // namespace dqa
