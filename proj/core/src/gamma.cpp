#include <cmath>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "failsim/error.hpp"
#include "failsim/stochastic.hpp"

namespace failsim
{

double gamma_cdf(double x, double shape, double rate)
{
    require(std::isfinite(shape) && shape > 0.0, "gamma_cdf: shape must be finite and positive");
    require(std::isfinite(rate) && rate > 0.0, "gamma_cdf: rate must be finite and positive");
    require(!std::isnan(x), "gamma_cdf: x is NaN");
    if (x <= 0.0)
        return 0.0;
    if (std::isinf(x))
        return 1.0;
    const double z = rate * x;
    // Below the mode P(a, z) <= z^a e^-z / Gamma(a+1) * (a+1)/(a+1-z). When that
    // underflows, answer 0 directly: Boost's prefix overflows and throws there for
    // large shapes (a = 5000, z = 1e-10 for instance).
    if (z < shape)
    {
        const double log_bound =
            shape * std::log(z) - z - std::lgamma(shape + 1.0) + std::log((shape + 1.0) / (shape + 1.0 - z));
        if (log_bound < -745.0)
            return 0.0;
    }
    return boost::math::gamma_p(shape, z);
}

SampledPath sample_gamma_path(const GammaProcessParams& params, double horizon, std::size_t steps,
                              RandomStream& rng)
{
    require(params.alpha > 0.0 && params.beta > 0.0, "sample_gamma_path: alpha and beta must be positive");
    require(std::isfinite(horizon) && horizon >= 0.0, "sample_gamma_path: horizon must be finite and >= 0");
    require(steps >= 1, "sample_gamma_path: steps must be >= 1");

    SampledPath path;
    if (horizon == 0.0)
    {
        path.values.assign(1, 0.0);
        return path;
    }

    path.step = horizon / static_cast<double>(steps);
    path.values.resize(steps + 1);
    path.values[0] = 0.0;
    std::gamma_distribution<double> increment(params.alpha * path.step, 1.0 / params.beta);
    for (std::size_t k = 1; k <= steps; ++k)
        path.values[k] = path.values[k - 1] + increment(rng);
    return path;
}

} // namespace failsim
