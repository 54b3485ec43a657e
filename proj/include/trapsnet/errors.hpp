#pragma once

#include <stdexcept>
#include <string>

namespace trapsnet {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tensor operands with incompatible shapes.
struct ShapeMismatch : Error {
    using Error::Error;
};

/// Ground action indices out of range for the instance.
struct IllegalAction : Error {
    using Error::Error;
};

/// Generator configuration violates a topology constraint.
struct InvalidTopology : Error {
    using Error::Error;
};

/// Checkpoint domain differs from the target instance domain.
struct DomainMismatch : Error {
    using Error::Error;
};

/// Checkpoint feature count differs from the instance-derived one.
struct FeatureCountMismatch : Error {
    using Error::Error;
};

/// Checkpoint format version not supported by this build.
struct VersionMismatch : Error {
    using Error::Error;
};

/// File could not be opened or written.
struct IoError : Error {
    using Error::Error;
};

/// Checkpoint payload does not match its stored checksum.
struct CorruptChecksum : Error {
    using Error::Error;
};

/// alpha() called with v_sup <= v_inf.
struct DegenerateRange : Error {
    using Error::Error;
};

/// A gradient accumulation round produced a non-finite gradient.
struct NonFiniteGradient : Error {
    using Error::Error;
};

} // namespace trapsnet
