#pragma once

#include <stdexcept>
#include <string>

namespace qnoise {

/// Precondition violated by the caller: out-of-range index, bad dimensions,
/// parameter outside its physical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configuration for which the requested quantity is undefined, e.g. a
/// normalization by an ideal probability that vanishes.
class DegenerateConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative numerics failed to reach the requested accuracy.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A classical message was lost in the distributed harness; the round is void.
class ChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace qnoise
