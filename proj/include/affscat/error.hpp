#pragma once

#include <stdexcept>
#include <string>

namespace affscat {

enum class ErrorKind {
    ZeroDivision,
    BasisMismatch,
    InconsistentDefect,
    NotInCone,
    NotInFiltration,
    NotAUnit,
    NotClosed,
    AtSingularPoint,
    TripleCollision,
    DegenerateConfiguration,
    PathThroughVertex,
    EndpointOnLine,
    DuplicateSingularPoint,
    EmptyRegion,
    NonConvexRegion,
    ZeroPolynomial,
    UnsupportedFormat,
    InvalidInput,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ZeroDivision: return "ZeroDivision";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::InconsistentDefect: return "InconsistentDefect";
    case ErrorKind::NotInCone: return "NotInCone";
    case ErrorKind::NotInFiltration: return "NotInFiltration";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::AtSingularPoint: return "AtSingularPoint";
    case ErrorKind::TripleCollision: return "TripleCollision";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::PathThroughVertex: return "PathThroughVertex";
    case ErrorKind::EndpointOnLine: return "EndpointOnLine";
    case ErrorKind::DuplicateSingularPoint: return "DuplicateSingularPoint";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::NonConvexRegion: return "NonConvexRegion";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace affscat
