#ifndef QPWAVE_ERRORS_HPP
#define QPWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qpwave {

/// Invalid mathematical input (argument outside the documented domain).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Operation requested for a parameter region where it is not defined
/// (e.g. asking for a period when no bounded nonconstant solution exists).
class ClassificationError : public std::runtime_error {
public:
    explicit ClassificationError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative numerical procedure exhausted its budget.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// A linear system was singular or the solve produced an unacceptable
/// residual. Never silently regularized.
class SolverFailure : public std::runtime_error {
public:
    explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qpwave

#endif  // QPWAVE_ERRORS_HPP
