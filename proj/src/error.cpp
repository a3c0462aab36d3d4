#include "wignerchaos/error.hpp"

namespace wigner {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::DuplicateIndex: return "DuplicateIndex";
        case ErrorKind::OrderMismatch: return "OrderMismatch";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::ContractionOrderTooLarge: return "ContractionOrderTooLarge";
        case ErrorKind::OddSize: return "OddSize";
        case ErrorKind::SizeGuardExceeded: return "SizeGuardExceeded";
        case ErrorKind::SizeMismatch: return "SizeMismatch";
        case ErrorKind::NotRespectful: return "NotRespectful";
        case ErrorKind::NotConnected: return "NotConnected";
        case ErrorKind::NotMirrorSymmetric: return "NotMirrorSymmetric";
        case ErrorKind::NotFullySymmetric: return "NotFullySymmetric";
        case ErrorKind::NotPSD: return "NotPSD";
        case ErrorKind::Overflow: return "Overflow";
        case ErrorKind::CovarianceMismatch: return "CovarianceMismatch";
        case ErrorKind::BoundViolation: return "BoundViolation";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace wigner
