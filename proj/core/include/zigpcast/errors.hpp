#pragma once

#include <stdexcept>
#include <string>

namespace zigpcast {

// Every failure raised by the library derives from Error. The subclasses map
// onto the command-line exit codes (config 2, fit 3, io 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent configuration / input data.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace zigpcast
