#pragma once

#include <stdexcept>
#include <string>

namespace failsim
{

/// Base for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// Data carries no information about the quantity being estimated.
class UnidentifiableError : public Error
{
  public:
    using Error::Error;
};

/// The requested computation is not available for this shock model.
class UnsupportedModeError : public Error
{
  public:
    using Error::Error;
};

/// No finite optimum exists on the searched grid.
class NoOptimumError : public Error
{
  public:
    using Error::Error;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error
{
  public:
    ConvergenceError(const std::string& what, int iterations, double last_estimate, double last_gradient);

    int iterations() const { return iterations_; }
    double last_estimate() const { return last_estimate_; }
    double last_gradient() const { return last_gradient_; }

  private:
    int iterations_;
    double last_estimate_;
    double last_gradient_;
};

/// Throws DomainError with `message` unless `condition` holds.
void require(bool condition, const std::string& message);

} // namespace failsim
