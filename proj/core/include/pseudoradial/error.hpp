#pragma once
#include <stdexcept>
#include <string>
#include <string_view>

namespace pseudoradial {

/// Failure categories reported by the library.
enum class Errc {
    InvalidArgument,
    NoSpecialOrbit,
    DegenerateCriticalPoint,
    SingularOriginReached,
    StepSizeUnderflow,
    NotClosed,
    WrongCase,
    OutOfRange,
    NoSuchMode,
    BracketFailure,
    IncompatibleExponent,
    EmptyDomain,
    ParamMismatch,
    DomainViolation,
    QuadratureFailure,
};

std::string_view to_string(Errc code) noexcept;

/// True when the request is refused because the mathematics of the case
/// excludes it, as opposed to a numerical procedure failing.
bool is_domain_refusal(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message);
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace pseudoradial
