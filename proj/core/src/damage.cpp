#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "failsim/error.hpp"
#include "failsim/stochastic.hpp"

namespace failsim
{

namespace
{

// Tanh-sinh clusters nodes at the ends of the window, which is where the
// integrand has its only nonsmooth point: G(H - y - u) behaves like
// (H - u - y)^{alpha t} as y reaches the remaining margin, nearly a step for
// short times. Construction is costly, so each thread keeps one.
boost::math::quadrature::tanh_sinh<double>& integrator()
{
    thread_local boost::math::quadrature::tanh_sinh<double> instance;
    return instance;
}

} // namespace

DamageSumDensity damage_sum_density(int m, const NormalParams& damage, double y)
{
    require(m >= 0, "damage_sum_density: m must be >= 0");
    require(damage.std > 0.0, "damage_sum_density: std must be positive");
    if (m == 0)
        return {true, y == 0.0 ? 1.0 : 0.0};

    const double mean = m * damage.mean;
    const double sd = std::sqrt(static_cast<double>(m)) * damage.std;
    const double z = (y - mean) / sd;
    return {false, std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi))};
}

double integrate_damage_sum(int m, const NormalParams& damage, const std::function<double(double)>& integrand,
                            double upper, double tolerance)
{
    require(m >= 0, "integrate_damage_sum: m must be >= 0");
    require(damage.std > 0.0, "integrate_damage_sum: std must be positive");
    if (m == 0)
        return upper >= 0.0 ? integrand(0.0) : 0.0;

    const double mean = m * damage.mean;
    const double sd = std::sqrt(static_cast<double>(m)) * damage.std;
    const double lo = mean - damage_window_sigmas * sd;
    const double hi = std::min(mean + damage_window_sigmas * sd, upper);
    if (!(hi > lo))
        return 0.0;

    const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
    auto weighted = [&](double y) {
        const double z = (y - mean) / sd;
        return integrand(y) * norm * std::exp(-0.5 * z * z);
    };
    return integrator().integrate(weighted, lo, hi, tolerance);
}

} // namespace failsim
