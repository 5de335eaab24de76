#pragma once

#include <stdexcept>
#include <string>

namespace tsw {

// Bad input: violated preconditions, malformed measures or trees.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// File could not be read, written or parsed. Message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tsw
