#pragma once

#include <stdexcept>
#include <string>

namespace dynstab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument shapes, mismatched domains or conductors, zero inputs.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A configured degree or conductor cap was exceeded.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, long value, long cap)
      : Error(what + " (" + std::to_string(value) + " > cap " + std::to_string(cap) + ")"),
        value_(value),
        cap_(cap) {}
  long value() const noexcept { return value_; }
  long cap() const noexcept { return cap_; }

 private:
  long value_;
  long cap_;
};

// Two independent computations disagreed (e.g. predicate vs. exact degrees).
class CrossCheckFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace dynstab
