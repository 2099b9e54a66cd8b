#pragma once

#include <stdexcept>
#include <string>

namespace kreeb {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input document is structurally malformed (bad JSON, wrong types,
// unknown fields, unparsable rationals).
struct SchemaError : Error {
    using Error::Error;
};

// Document parsed but a named model invariant fails; the message names
// the invariant and the offending vertex/edge ids.
struct InvariantViolation : Error {
    using Error::Error;
};

// Surface is non-orientable, the 2-sphere, or the 2-torus.
struct UnsupportedSurface : Error {
    using Error::Error;
};

// A group element does not conform to the expression it is used with.
struct ShapeMismatch : Error {
    using Error::Error;
};

// An enumeration or scan would exceed the configured cap.
struct CapExceeded : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Asked for pi1 of a quotient by an action that is not certified free.
struct NotFree : Error {
    using Error::Error;
};

// eta projection requested on a group that is not a piece-analysis result.
struct NotAPieceGroup : Error {
    using Error::Error;
};

}  // namespace kreeb
