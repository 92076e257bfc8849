#pragma once

#include <stdexcept>
#include <string>

namespace heis {

// Bad arguments: dimension mismatch, out-of-range index, invalid sizes.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A function lacks the derivative (or structure) an operation needs.
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Mathematical domain violation, e.g. a negative sample fed to an entropy.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heis
