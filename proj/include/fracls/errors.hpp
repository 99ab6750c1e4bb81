#pragma once

#include <stdexcept>
#include <string>

namespace fracls {

/// Argument outside the mathematical domain of an operation (pole, empty
/// interval, evaluation point on the wrong side of a terminal, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure could not reach its target accuracy.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved_tolerance)
        : std::runtime_error(what + " (achieved relative tolerance "
                             + std::to_string(achieved_tolerance) + ")"),
          achieved_(achieved_tolerance) {}

    double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Reading or writing a result file failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fracls
