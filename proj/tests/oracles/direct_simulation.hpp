#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "failsim/model.hpp"

namespace failsim::oracle
{

struct Estimate
{
    double mean = 0.0;
    double standard_error = 0.0;
};

/**
 * Brute-force series-system survival at t for a path-independent count law:
 * draws the shock count (Poisson, or negative binomial via its gamma-Poisson
 * mixture), a magnitude and a damage per shock and component, and the pure
 * degradation X_i(t) ~ Gamma(alpha t, rate beta); survives when no magnitude
 * reaches D_i and X_i + damages + u_i stays below H_i for every component.
 */
inline Estimate direct_system_survival(const SystemSpec& system, const InitialAges& ages, double t,
                                       std::size_t runs, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const FacilitationParams shocks = system.effective_shock_model();
    const double Lambda0 = shocks.lambda0 * t;

    std::size_t survived = 0;
    for (std::size_t run = 0; run < runs; ++run)
    {
        double mean_count = Lambda0;
        if (shocks.eta > 0.0)
        {
            const double r = 1.0 / shocks.eta;
            const double odds = std::expm1(shocks.eta * Lambda0); // p / (1 - p)
            mean_count = std::gamma_distribution<double>(r, odds)(rng);
        }
        const int count = mean_count > 0.0 ? std::poisson_distribution<int>(mean_count)(rng) : 0;

        bool alive = true;
        for (std::size_t i = 0; i < system.components.size(); ++i)
        {
            const auto& c = system.components[i];
            double damage = 0.0;
            for (int j = 0; j < count; ++j)
            {
                const double w = c.shock_magnitude.mean + c.shock_magnitude.std * normal(rng);
                if (w >= c.hard_threshold)
                    alive = false;
                if (c.shock_damage)
                    damage += c.shock_damage->mean + c.shock_damage->std * normal(rng);
            }
            const double x = std::gamma_distribution<double>(c.degradation.alpha * t, 1.0 / c.degradation.beta)(rng);
            if (x + damage + ages.u[i] >= c.soft_threshold)
                alive = false;
        }
        survived += alive ? 1 : 0;
    }
    const double p = static_cast<double>(survived) / static_cast<double>(runs);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(runs))};
}

} // namespace failsim::oracle
