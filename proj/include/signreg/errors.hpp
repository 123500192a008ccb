#pragma once

#include <stdexcept>
#include <string>

namespace signreg {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coefficient / problem validation.
struct NonPositiveLeadingCoefficient : Error { using Error::Error; };
struct IllegalAtomOrder : Error { using Error::Error; };
struct DegenerateBoundaryFunctional : Error { using Error::Error; };

// Discretization and linear algebra.
struct MeshMissingAtom : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct PointNotOnMesh : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };

// Kernel analysis.
struct EmptyRestriction : Error { using Error::Error; };

// Sign analysis.
struct NotProposition11Shape : Error { using Error::Error; };
struct ChainSearchFailed : Error { using Error::Error; };

// Conjugation transforms.
struct SNotPositive : Error { using Error::Error; };
struct SigmaNotPositive : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };

/// Configuration file error with source position.
struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_, int column_)
        : Error("parse error at line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ": " + msg),
          line(line_), column(column_) {}
};

}  // namespace signreg
