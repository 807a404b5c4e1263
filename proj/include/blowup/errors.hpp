#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

// Shared error vocabulary. Every throwing operation documents which of these
// it can raise; anything else escaping a module is a bug.

struct NegativeInput : std::domain_error {
    explicit NegativeInput(const std::string& what) : std::domain_error(what) {}
};

struct LogDomainError : std::domain_error {
    explicit LogDomainError(const std::string& what) : std::domain_error(what) {}
};

struct InvalidRange : std::invalid_argument {
    explicit InvalidRange(const std::string& what) : std::invalid_argument(what) {}
};

struct QuadratureNoConvergence : std::runtime_error {
    explicit QuadratureNoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct WindowViolation : std::invalid_argument {
    explicit WindowViolation(const std::string& what) : std::invalid_argument(what) {}
};

struct OrderingViolation : std::invalid_argument {
    explicit OrderingViolation(const std::string& what) : std::invalid_argument(what) {}
};

struct NeverHolds : std::runtime_error {
    explicit NeverHolds(const std::string& what) : std::runtime_error(what) {}
};

struct LimitNotAboveOne : std::runtime_error {
    explicit LimitNotAboveOne(const std::string& what) : std::runtime_error(what) {}
};

struct StepUnderflow : std::runtime_error {
    explicit StepUnderflow(const std::string& what) : std::runtime_error(what) {}
};

struct NonlinearSubstepOverflow : std::runtime_error {
    explicit NonlinearSubstepOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct DomainTooSmall : std::runtime_error {
    explicit DomainTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct SupersolutionViolation : std::runtime_error {
    explicit SupersolutionViolation(const std::string& what) : std::runtime_error(what) {}
};

struct ConvexityViolation : std::runtime_error {
    explicit ConvexityViolation(const std::string& what) : std::runtime_error(what) {}
};

struct BoundViolated : std::runtime_error {
    explicit BoundViolated(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace blowup
