#pragma once

#include <stdexcept>
#include <string>

namespace accelosc {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Time step or grid too coarse for the requested accuracy.
class ResolutionError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A run-length or sampling precondition that cannot be met.
class PreconditionError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Integrand produced a non-finite value.
class EvaluationError : public std::runtime_error
{
public:
    EvaluationError(const std::string& what, double abscissa)
        : std::runtime_error(what), abscissa_(abscissa)
    {
    }

    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

/// Fock-space cutoff too small for the requested squeezing.
class TruncationError : public std::runtime_error
{
public:
    TruncationError(const std::string& what, int required_n_max)
        : std::runtime_error(what), required_n_max_(required_n_max)
    {
    }

    int required_n_max() const noexcept { return required_n_max_; }

private:
    int required_n_max_;
};

} // namespace accelosc
