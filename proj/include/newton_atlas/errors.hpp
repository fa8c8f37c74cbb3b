#pragma once

#include <stdexcept>
#include <string>

namespace newton_atlas {

/// Base class for all domain errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroPolynomial : Error {
    using Error::Error;
};

struct DivisionByZeroPolynomial : Error {
    using Error::Error;
};

/// The map reduces to a constant (degree 0) or has degree too small to analyze.
struct DegenerateMap : Error {
    using Error::Error;
};

/// Requested a parabolic-only quantity on a map whose point at infinity is not parabolic.
struct NotParabolic : Error {
    using Error::Error;
};

/// A root or petal sample point needed by basin analysis falls outside the raster region.
struct RootOutsideRegion : Error {
    using Error::Error;
};

/// A parabolic immediate basin could not be located along a petal direction.
struct ImmediateBasinNotFound : Error {
    using Error::Error;
};

/// Census refused: a critical point cannot be assigned to a component with confidence.
struct CriticalPointUnresolved : Error {
    using Error::Error;
};

struct SeedNotInParabolicBasin : Error {
    using Error::Error;
};

struct SegmentLeavesBasin : Error {
    using Error::Error;
};

struct TraceLandingMismatch : Error {
    using Error::Error;
};

struct IOFailure : Error {
    using Error::Error;
};

/// Input file or spec document violates the expected schema.
struct MalformedSpec : Error {
    using Error::Error;
};

/// Internal numerical consistency check failed (should not happen on sane inputs).
struct NumericalFailure : Error {
    using Error::Error;
};

}  // namespace newton_atlas
