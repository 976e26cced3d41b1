#pragma once

#include <stdexcept>
#include <string>

namespace s2shock {

enum class ErrorKind {
    DomainError,
    ContractViolation,
    ConfigError,
    ProjectionSingular,
    UnsupportedOrder,
    DerivationMismatch,
    PastBlowup,
    OracleDomain,
    PoleSingularity,
    DiagnosticUndefined,
    RhsDegenerate,
    MarginError,
    IoError,
};

auto to_string(ErrorKind kind) -> const char*;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    auto kind() const noexcept -> ErrorKind { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const char* what)
{
    if (!cond) raise(kind, what);
}

}  // namespace s2shock
