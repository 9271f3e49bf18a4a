#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace solh {

/// Violated mathematical precondition (zero denominator, incoherent tower,
/// non-descending character where descent is required).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A residue modulus could not be resolved by the available tower.
/// `required_depth` is the lcm-tower depth that would resolve it, or 0 when
/// no depth in the default family can (custom towers).
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, std::size_t required_depth)
      : std::runtime_error(what), required_depth_(required_depth) {}

  std::size_t required_depth() const noexcept { return required_depth_; }

 private:
  std::size_t required_depth_;
};

/// Non-finite samples or otherwise unusable numeric input.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed external input. `pointer` is an RFC 6901 JSON pointer to the
/// offending value ("" for the document root).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string pointer, const std::string& message)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace solh
