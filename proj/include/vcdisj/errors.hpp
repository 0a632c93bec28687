#pragma once

#include <stdexcept>
#include <string>

namespace vcdisj {

// Parameters outside an operation's precondition (length mismatch, range, divisibility).
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration or exhaustive search would exceed its configured cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Inputs of two operands come from different instances.
class InstanceMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A promise problem was handed inputs outside its promise.
class PromiseViolated : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Both parties blocked on receive with nothing in flight, or a party read past a message.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename E = InvalidParameters>
inline void require(bool cond, const std::string& what) {
  if (!cond) throw E(what);
}

}  // namespace detail
}  // namespace vcdisj
