#include "failsim/error.hpp"

namespace failsim
{

ConvergenceError::ConvergenceError(const std::string& what, int iterations, double last_estimate,
                                   double last_gradient)
    : Error(what + " (iterations=" + std::to_string(iterations) + ", estimate=" + std::to_string(last_estimate) +
            ", gradient=" + std::to_string(last_gradient) + ")"),
      iterations_(iterations), last_estimate_(last_estimate), last_gradient_(last_gradient)
{
}

void require(bool condition, const std::string& message)
{
    if (!condition)
        throw DomainError(message);
}

} // namespace failsim
