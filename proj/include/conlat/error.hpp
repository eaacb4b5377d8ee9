#pragma once

#include <stdexcept>
#include <string>

namespace conlat {

/// Raised for malformed or out-of-range caller input (bad element indices,
/// non-bijective tables, invalid specs, parse failures).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a computation would exceed a configured size bound.
class BoundError : public std::length_error {
 public:
  explicit BoundError(const std::string& what) : std::length_error(what) {}
};

}  // namespace conlat
