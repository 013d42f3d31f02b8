#pragma once

#include <stdexcept>
#include <string>

namespace oddsquant {

/// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed file content or arguments that violate a documented precondition.
struct InvalidInput : Error {
    using Error::Error;
};

struct EmptyDataset : Error {
    using Error::Error;
};

/// Training data contains no records for one of the two classes.
struct EmptyClass : Error {
    using Error::Error;
};

/// A bin has a zero count for some class and no smoothing was requested,
/// so the positivity requirement on the conditional densities fails.
struct ZeroBin : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

/// The likelihood ratio is constant on the support of the target
/// distribution; the scale equation has no isolated solution to report.
struct DegenerateLambda : Error {
    using Error::Error;
};

/// The two class-conditional densities coincide (I = 1); the debiased
/// estimator divides by 1 - I and is undefined.
struct DegenerateOverlap : Error {
    using Error::Error;
};

/// A joint table failed its normalization check, i.e. the supplied prior
/// and scale are inconsistent with the target distribution.
struct NotNormalized : Error {
    using Error::Error;
};

} // namespace oddsquant
