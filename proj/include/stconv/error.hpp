#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stconv {

/// Raised when two space elements (or an element and an operator) live in
/// incompatible spaces: dense vs sparse, or dense with different dimensions.
class SpaceMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A subsequence lookup ran past its index-probe cap before finding the
/// requested member.
class HorizonExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Descriptor grammar error. `position` is the byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace stconv
