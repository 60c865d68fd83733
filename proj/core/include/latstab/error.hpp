#pragma once

#include <stdexcept>
#include <string>

namespace latstab {

/// Parameter outside the domain of a family, normalizer, or command.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// The DFT of a CF left an imaginary residue too large for a lattice law.
class InversionError : public std::runtime_error {
 public:
  explicit InversionError(const std::string& what) : std::runtime_error(what) {}
};

/// A truncated base series carries more tail mass than the caller allows,
/// or a composed argument left the closed unit disk.
class CompositionError : public std::runtime_error {
 public:
  explicit CompositionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace latstab
