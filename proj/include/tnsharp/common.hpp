// Shared vocabulary for the tnsharp core: exact integers and the error
// hierarchy that the C API maps onto status codes.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tnsharp {

/// Exact nonnegative counts. Never overflows.
using BigInt = boost::multiprecision::cpp_int;

inline BigInt pow2(std::uint64_t exponent) {
  BigInt v = 1;
  v <<= static_cast<unsigned>(exponent);
  return v;
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DIMACS or expression text. `position` is a byte offset into the
/// input (or npos when the error is not tied to one place).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position = npos)
      : Error(position == npos ? what : what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A dense guard (n too large for brute force / dense states, tensor too big).
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// The formula needs more COPY branches than the configured limit.
class BranchGuardExceeded : public Error {
 public:
  BranchGuardExceeded(std::size_t copies, std::size_t limit)
      : Error("network has " + std::to_string(copies) + " COPY-tensors, more than --max-branch-vars=" +
              std::to_string(limit) + "; raise --max-branch-vars or pass --force"),
        copies_(copies),
        limit_(limit) {}

  std::size_t copies() const noexcept { return copies_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t copies_;
  std::size_t limit_;
};

/// A self-check inside the library failed. Indicates a bug, not bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace tnsharp
