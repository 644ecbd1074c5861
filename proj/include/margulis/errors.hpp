#pragma once

#include <stdexcept>
#include <string>

namespace margulis {

/// Base class for every error this library raises on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An ExplicitQuotients source ran out of partial quotients.
struct QuotientsExhausted : Error {
    using Error::Error;
};

/// The requested enclosure width is unreachable within the escalation cap.
struct PrecisionExceeded : Error {
    using Error::Error;
};

/// A growth-rule source refused to generate a quotient past its size cap.
struct OverflowPolicy : Error {
    using Error::Error;
};

/// Rational function evaluated on an interval whose denominator contains 0.
struct PoleProximity : Error {
    using Error::Error;
};

/// A certified invariant failed; this signals a bug, not a math event.
struct ContractViolation : Error {
    using Error::Error;
};

struct PreconditionViolated : Error {
    using Error::Error;
};

/// Query outside the range covered by a profile or formula.
struct OutOfRange : Error {
    using Error::Error;
};

struct NotInRegion : Error {
    using Error::Error;
};

struct NotBoundedType : Error {
    using Error::Error;
};

struct SearchExhausted : Error {
    using Error::Error;
};

struct UnknownFormula : Error {
    using Error::Error;
};

struct ScanBudgetExceeded : Error {
    using Error::Error;
};

}  // namespace margulis
