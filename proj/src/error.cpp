#include "s2shock/error.hpp"

namespace s2shock {

auto to_string(ErrorKind kind) -> const char*
{
    switch (kind) {
    case ErrorKind::DomainError: return "domain_error";
    case ErrorKind::ContractViolation: return "contract_violation";
    case ErrorKind::ConfigError: return "config_error";
    case ErrorKind::ProjectionSingular: return "projection_singular";
    case ErrorKind::UnsupportedOrder: return "unsupported_order";
    case ErrorKind::DerivationMismatch: return "derivation_mismatch";
    case ErrorKind::PastBlowup: return "past_blowup";
    case ErrorKind::OracleDomain: return "oracle_domain";
    case ErrorKind::PoleSingularity: return "pole_singularity";
    case ErrorKind::DiagnosticUndefined: return "diagnostic_undefined";
    case ErrorKind::RhsDegenerate: return "rhs_degenerate";
    case ErrorKind::MarginError: return "margin_error";
    case ErrorKind::IoError: return "io_error";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
{
}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace s2shock
