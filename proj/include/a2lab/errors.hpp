#pragma once

#include <stdexcept>
#include <string>

namespace a2lab {

/// Malformed or inconsistent input (bad file, invalid vertex, broken precondition).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// The ambient truncation is too shallow for the requested computation.
/// Never a refutation of a mathematical claim.
class DepthError : public std::runtime_error {
 public:
  explicit DepthError(const std::string& what) : std::runtime_error(what) {}
};

/// A structural axiom failed with a concrete witness (serialized into what()).
class StructureError : public std::runtime_error {
 public:
  explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace a2lab
