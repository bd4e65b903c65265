#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pg4 {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct ParseError : Error {
    ParseError(const std::string& msg, int line, int col, std::string expected_tokens = {})
        : Error(msg + " at " + std::to_string(line) + ":" + std::to_string(col) +
                (expected_tokens.empty() ? "" : " (expected " + expected_tokens + ")")),
          line(line), col(col), expected(std::move(expected_tokens)) {}

    int line = 0;
    int col = 0;
    std::string expected;
};

struct UnknownIdentifier : ParseError {
    UnknownIdentifier(std::string ident, int line, int col)
        : ParseError("unknown identifier '" + ident + "'", line, col), name(std::move(ident)) {}

    std::string name;
};

struct ArityError : ParseError {
    ArityError(const std::string& ident, int line, int col)
        : ParseError("'" + ident + "' is a function and needs an argument list", line, col) {}
};

// ---------------------------------------------------------------------------
// Jet calculus
// ---------------------------------------------------------------------------

struct JetDomainError : Error {
    using Error::Error;
};

struct JetDivisionByZero : JetDomainError {
    JetDivisionByZero() : JetDomainError("division by a jet with zero value") {}
};

struct NotAdmissible : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

struct GeometryError : Error {
    using Error::Error;
};

struct DegenerateFirstCurvature : GeometryError {
    using GeometryError::GeometryError;
};

struct DegenerateTorsion : GeometryError {
    using GeometryError::GeometryError;
};

struct DegenerateThirdCurvature : GeometryError {
    using GeometryError::GeometryError;
};

struct LightlikeFrameVector : GeometryError {
    using GeometryError::GeometryError;
};

struct ApparatusFailure : GeometryError {
    using GeometryError::GeometryError;
};

struct IllConditionedFit : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Specifications (integrator inputs, CLI configs)
// ---------------------------------------------------------------------------

struct SpecificationError : Error {
    using Error::Error;
};

struct InconsistentSignature : SpecificationError {
    using SpecificationError::SpecificationError;
};

struct DomainContainsSingularity : SpecificationError {
    using SpecificationError::SpecificationError;
};

struct StepTooLarge : SpecificationError {
    using SpecificationError::SpecificationError;
};

struct InsufficientSamples : SpecificationError {
    using SpecificationError::SpecificationError;
};

}  // namespace pg4
