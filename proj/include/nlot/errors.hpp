#pragma once

#include <stdexcept>
#include <string>

namespace nlot {

/// Structural misuse of the model: bad alphabets, mismatched schemas,
/// malformed protocol specs, unknown names.  Maps to CLI exit code 2.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditioning on an event of exact mass zero.  Never silently returns
/// a junk distribution.
class ZeroMassConditionError : public StructuralError {
 public:
  using StructuralError::StructuralError;
};

/// An enumeration would exceed a configured bound.  The message carries the
/// exact size that was requested.
class BoundExceededError : public StructuralError {
 public:
  using StructuralError::StructuralError;
};

}  // namespace nlot
