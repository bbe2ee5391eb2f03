#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spectraledge {

enum class ErrorKind {
    InvalidConfig,
    InvalidArgument,
    DomainError,
    PoleError,
    SolverFailure,
    EdgeNotFound,
    DegenerateScaling,
    NumericError,
    IoError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::PoleError: return "pole-error";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::EdgeNotFound: return "edge-not-found";
    case ErrorKind::DegenerateScaling: return "degenerate-scaling";
    case ErrorKind::NumericError: return "numeric-error";
    case ErrorKind::IoError: return "io-error";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the kinds above so the
/// command-line front end can map it to an exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

    /// Configuration and argument errors are the caller's fault; everything
    /// else is a numerical failure.
    bool is_config_error() const noexcept
    {
        return kind_ == ErrorKind::InvalidConfig || kind_ == ErrorKind::InvalidArgument;
    }

private:
    ErrorKind kind_;
};

/// Raised when the fixed-point solve does not converge; keeps the last residual.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, double residual)
        : Error(ErrorKind::SolverFailure, what + " (last residual " + std::to_string(residual) + ")"),
          residual_(residual)
    {
    }
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Raised when the scaling equation has no positive real root; keeps A and B.
class DegenerateScaling : public Error {
public:
    DegenerateScaling(double a, double b)
        : Error(ErrorKind::DegenerateScaling,
                "scaling equation has no positive root (A=" + std::to_string(a) +
                    ", B=" + std::to_string(b) + ")"),
          a_(a), b_(b)
    {
    }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }

private:
    double a_;
    double b_;
};

} // namespace spectraledge
