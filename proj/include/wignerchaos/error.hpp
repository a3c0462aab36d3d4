#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wigner {

// Every failure raised by the library carries one of these kinds. The
// message always starts with the kind name so callers (and the CLI) can
// match on it textually.
enum class ErrorKind {
    InvalidArgument,
    IndexOutOfRange,
    DuplicateIndex,
    OrderMismatch,
    GridMismatch,
    ContractionOrderTooLarge,
    OddSize,
    SizeGuardExceeded,
    SizeMismatch,
    NotRespectful,
    NotConnected,
    NotMirrorSymmetric,
    NotFullySymmetric,
    NotPSD,
    Overflow,
    CovarianceMismatch,
    BoundViolation,
    ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace wigner
