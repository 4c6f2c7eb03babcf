#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace amm {

/// Thrown when a computation would exceed a configured budget (residue width
/// cap, scan period cap, oracle bound, escalation cap). Carries enough
/// structure for a machine-parsable report; callers that can degrade
/// gracefully (the verifier) translate it into an Unresolved finding instead
/// of a wrong answer.
class ResourceError : public std::runtime_error {
public:
    ResourceError(std::string kind, uint64_t required, uint64_t budget)
        : std::runtime_error("resource: kind=" + kind +
                             " required=" + std::to_string(required) +
                             " budget=" + std::to_string(budget)),
          kind_(std::move(kind)), required_(required), budget_(budget) {}

    const std::string& kind() const { return kind_; }
    uint64_t required() const { return required_; }
    uint64_t budget() const { return budget_; }

private:
    std::string kind_;
    uint64_t required_;
    uint64_t budget_;
};

} // namespace amm
