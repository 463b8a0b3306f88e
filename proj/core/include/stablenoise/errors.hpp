#pragma once

#include <stdexcept>
#include <string>

namespace stablenoise {

// Kernel failed an admissibility check (integrability, decay, continuity).
class integrand_rejected : public std::runtime_error {
public:
    explicit integrand_rejected(const std::string& why) : std::runtime_error(why) {}
};

// Quadrature did not converge or a truncation budget was exceeded.
class numerical_failure : public std::runtime_error {
public:
    explicit numerical_failure(const std::string& why) : std::runtime_error(why) {}
};

}  // namespace stablenoise
