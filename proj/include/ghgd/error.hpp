#ifndef GHGD_ERROR_HPP
#define GHGD_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ghgd {

/// Raised when an argument is outside the domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a computation would exceed its configured work budget.
/// `reached()` is the count (states, tuples or patterns) at the point of refusal.
class budget_exceeded : public std::runtime_error {
public:
    budget_exceeded(const std::string& what, std::uint64_t reached)
        : std::runtime_error(what + " (reached " + std::to_string(reached) + ")"),
          reached_(reached) {}

    std::uint64_t reached() const noexcept { return reached_; }

private:
    std::uint64_t reached_;
};

}  // namespace ghgd

#endif  // GHGD_ERROR_HPP
