#include "pseudoradial/error.hpp"

namespace pseudoradial {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NoSpecialOrbit: return "NoSpecialOrbit";
    case Errc::DegenerateCriticalPoint: return "DegenerateCriticalPoint";
    case Errc::SingularOriginReached: return "SingularOriginReached";
    case Errc::StepSizeUnderflow: return "StepSizeUnderflow";
    case Errc::NotClosed: return "NotClosed";
    case Errc::WrongCase: return "WrongCase";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::NoSuchMode: return "NoSuchMode";
    case Errc::BracketFailure: return "BracketFailure";
    case Errc::IncompatibleExponent: return "IncompatibleExponent";
    case Errc::EmptyDomain: return "EmptyDomain";
    case Errc::ParamMismatch: return "ParamMismatch";
    case Errc::DomainViolation: return "DomainViolation";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    }
    return "Unknown";
}

bool is_domain_refusal(Errc code) noexcept
{
    switch (code) {
    case Errc::NoSpecialOrbit:
    case Errc::WrongCase:
    case Errc::OutOfRange:
    case Errc::NoSuchMode:
    case Errc::IncompatibleExponent:
    case Errc::EmptyDomain:
    case Errc::ParamMismatch:
    case Errc::DomainViolation:
        return true;
    default:
        return false;
    }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

}  // namespace pseudoradial
