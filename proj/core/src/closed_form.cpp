#include <algorithm>
#include <cmath>

#include "failsim/error.hpp"
#include "failsim/reliability.hpp"

namespace failsim
{

namespace
{

// Once the lower edge of the damage window passes the remaining margin, every
// larger shock count has zero survival too.
bool past_damage_window(const ComponentSpec& component, double u, int m)
{
    if (!component.shock_damage || m == 0)
        return false;
    const auto& y = *component.shock_damage;
    const double lo = m * y.mean - damage_window_sigmas * std::sqrt(static_cast<double>(m)) * y.std;
    return y.mean > 0.0 && lo >= component.soft_threshold - u;
}

int adaptive_max_shocks(double Lambda0, double eta)
{
    int max_count = 16;
    while (count_tail_mass(max_count, Lambda0, eta) >= 1e-15 && max_count < (1 << 20))
        max_count *= 2;
    return max_count;
}

} // namespace

double component_survival_given_shocks(double t, double u, const ComponentSpec& component, int m)
{
    require(t >= 0.0, "component reliability: t must be >= 0");
    require(u >= 0.0, "component reliability: initial level must be >= 0");
    require(m >= 0, "component reliability: m must be >= 0");
    const double margin = component.soft_threshold - u;
    if (margin <= 0.0)
        return 0.0;

    const double hard = m == 0 ? 1.0 : std::pow(no_hard_failure_prob(component), m);
    if (hard == 0.0)
        return 0.0;

    const double shape = component.degradation.alpha * t;
    const double rate = component.degradation.beta;
    auto soft = [&](double y) {
        const double room = margin - y;
        if (shape == 0.0)
            return room > 0.0 ? 1.0 : 0.0;
        return gamma_cdf(room, shape, rate);
    };

    if (!component.shock_damage || m == 0)
        return hard * soft(0.0);
    return hard * integrate_damage_sum(m, *component.shock_damage, soft, margin);
}

double component_reliability_closed(double t, double u, const ComponentSpec& component,
                                    std::span<const double> pmf)
{
    require(!pmf.empty(), "component_reliability_closed: empty count pmf");
    if (u >= component.soft_threshold)
        return 0.0;
    double total = 0.0;
    for (std::size_t m = 0; m < pmf.size(); ++m)
    {
        const int count = static_cast<int>(m);
        if (past_damage_window(component, u, count))
            break;
        if (pmf[m] != 0.0)
            total += pmf[m] * component_survival_given_shocks(t, u, component, count);
    }
    return std::clamp(total, 0.0, 1.0);
}

double system_reliability_closed(double t, const InitialAges& ages, const SystemSpec& system,
                                 std::optional<int> max_shocks)
{
    require(ages.u.size() == system.components.size(), "system_reliability_closed: one initial level per component");
    require(t >= 0.0, "system_reliability_closed: t must be >= 0");
    const FacilitationParams shocks = system.effective_shock_model();
    if (system.mode == ShockMode::facilitation && shocks.gamma > 0.0)
        throw UnsupportedModeError("closed form needs a path-independent shock count (gamma = 0); "
                                   "use the Monte Carlo estimator");
    if (any_failed_at_start(system, ages))
        return 0.0;

    const double Lambda0 = shocks.lambda0 * t;
    const int max_count = max_shocks.value_or(adaptive_max_shocks(Lambda0, shocks.eta));
    require(max_count >= 0, "system_reliability_closed: max_shocks must be >= 0");

    double total = 0.0;
    for (int m = 0; m <= max_count; ++m)
    {
        bool exhausted = false;
        for (std::size_t i = 0; i < system.components.size(); ++i)
            exhausted = exhausted || past_damage_window(system.components[i], ages.u[i], m);
        if (exhausted)
            break;
        const double p = count_pmf(m, Lambda0, shocks.eta);
        if (p == 0.0)
            continue;
        double product = 1.0;
        for (std::size_t i = 0; i < system.components.size() && product != 0.0; ++i)
            product *= component_survival_given_shocks(t, ages.u[i], system.components[i], m);
        total += product * p;
    }
    return std::clamp(total, 0.0, 1.0);
}

ReliabilityCurve closed_form_curve(const SystemSpec& system, const InitialAges& ages, std::span<const double> t_grid,
                                   std::optional<int> max_shocks)
{
    ReliabilityCurve curve;
    curve.method = CurveMethod::closed_form;
    curve.initial_reliability = any_failed_at_start(system, ages) ? 0.0 : 1.0;
    curve.points.reserve(t_grid.size());
    for (double t : t_grid)
        curve.points.push_back({t, system_reliability_closed(t, ages, system, max_shocks), 0.0});
    return curve;
}

} // namespace failsim
