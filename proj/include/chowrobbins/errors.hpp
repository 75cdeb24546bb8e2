#pragma once

#include <stdexcept>
#include <string>

namespace chowrobbins {

// Argument outside an operation's domain (bad coordinates, zero denominator,
// non-coprime barrier, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An iterative computation stopped at its step cap without reaching the
// requested tolerance. Carries the last certified bracket.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double lower, double upper)
        : std::runtime_error(what), lower_(lower), upper_(upper) {}

    double lower() const { return lower_; }
    double upper() const { return upper_; }

private:
    double lower_;
    double upper_;
};

}  // namespace chowrobbins
