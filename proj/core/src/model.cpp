#include "failsim/model.hpp"

#include <cmath>

#include "failsim/error.hpp"

namespace failsim
{

namespace
{

bool positive(double x) { return std::isfinite(x) && x > 0.0; }
bool nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

} // namespace

const char* to_string(ShockMode mode)
{
    return mode == ShockMode::poisson ? "poisson" : "facilitation";
}

std::optional<ShockMode> parse_shock_mode(const std::string& text)
{
    if (text == "poisson")
        return ShockMode::poisson;
    if (text == "facilitation")
        return ShockMode::facilitation;
    return std::nullopt;
}

FacilitationParams SystemSpec::effective_shock_model() const
{
    if (mode == ShockMode::poisson)
        return {shock_model.lambda0, 0.0, 0.0};
    return shock_model;
}

SystemSpec SystemSpec::with_mode(ShockMode other) const
{
    SystemSpec copy = *this;
    copy.mode = other;
    return copy;
}

double expected_degradation_after(const ComponentSpec& component, double elapsed)
{
    require(elapsed >= 0.0, "expected_degradation_after: elapsed time must be >= 0");
    return component.degradation.mean_at(elapsed);
}

bool failed_at_start(const ComponentSpec& component, double u) { return u >= component.soft_threshold; }

bool any_failed_at_start(const SystemSpec& system, const InitialAges& ages)
{
    for (std::size_t i = 0; i < system.components.size() && i < ages.u.size(); ++i)
        if (failed_at_start(system.components[i], ages.u[i]))
            return true;
    return false;
}

double no_hard_failure_prob(const ComponentSpec& component)
{
    const auto& w = component.shock_magnitude;
    require(positive(w.std), "no_hard_failure_prob: shock magnitude std must be positive");
    const double z = (component.hard_threshold - w.mean) / w.std;
    const double p = 0.5 * std::erfc(-z / std::sqrt(2.0));
    if (p > 1.0 - probability_clamp)
        return 1.0;
    if (p < probability_clamp)
        return 0.0;
    return p;
}

std::vector<Violation> check_system(const SystemSpec& system)
{
    std::vector<Violation> out;
    if (system.components.empty())
        out.push_back({"components", "system needs at least one component"});

    for (std::size_t i = 0; i < system.components.size(); ++i)
    {
        const auto& c = system.components[i];
        const std::string at = "components[" + std::to_string(i) + "].";
        if (c.name.empty())
            out.push_back({at + "name", "name must not be empty"});
        if (!positive(c.soft_threshold))
            out.push_back({at + "H", "soft failure threshold must be > 0"});
        if (!positive(c.hard_threshold))
            out.push_back({at + "D", "hard failure threshold must be > 0"});
        if (!positive(c.degradation.alpha))
            out.push_back({at + "alpha", "gamma shape rate must be > 0"});
        if (!positive(c.degradation.beta))
            out.push_back({at + "beta", "gamma rate must be > 0"});
        if (!std::isfinite(c.shock_magnitude.mean))
            out.push_back({at + "w_mean", "shock magnitude mean must be finite"});
        if (!positive(c.shock_magnitude.std))
            out.push_back({at + "w_std", "shock magnitude std must be > 0"});
        if (c.shock_damage)
        {
            if (!std::isfinite(c.shock_damage->mean))
                out.push_back({at + "y_mean", "shock damage mean must be finite"});
            if (!positive(c.shock_damage->std))
                out.push_back({at + "y_std", "shock damage std must be > 0"});
        }
    }

    const auto& s = system.shock_model;
    if (!positive(s.lambda0))
        out.push_back({"system.lambda0", "initial shock intensity must be > 0"});
    if (!nonnegative(s.eta))
        out.push_back({"system.eta", "facilitation factor must be >= 0"});
    if (!nonnegative(s.gamma))
        out.push_back({"system.gamma", "dependence factor must be >= 0"});
    return out;
}

std::vector<Violation> check_ages(const SystemSpec& system, const InitialAges& ages)
{
    std::vector<Violation> out;
    if (ages.u.size() != system.components.size())
    {
        out.push_back({"u", "dimension mismatch: " + std::to_string(ages.u.size()) + " initial ages for " +
                                std::to_string(system.components.size()) + " components"});
        return out;
    }
    for (std::size_t i = 0; i < ages.u.size(); ++i)
        if (!nonnegative(ages.u[i]))
            out.push_back({"components[" + std::to_string(i) + "].u", "initial degradation must be >= 0"});
    return out;
}

std::vector<Violation> check_costs(const CostModel& costs)
{
    std::vector<Violation> out;
    if (!nonnegative(costs.inspection))
        out.push_back({"costs.c_i", "inspection cost must be >= 0"});
    if (!nonnegative(costs.replacement))
        out.push_back({"costs.c_r", "replacement cost must be >= 0"});
    if (!nonnegative(costs.downtime_rate))
        out.push_back({"costs.c_rho", "downtime cost rate must be >= 0"});
    if (out.empty() && costs.inspection == 0.0 && costs.replacement == 0.0 && costs.downtime_rate == 0.0)
        out.push_back({"costs", "at least one cost must be > 0"});
    return out;
}

ValidationResult validate_system(const SystemSpec& system, const InitialAges& ages, const CostModel& costs)
{
    ValidationResult result;
    auto add = [&result](const std::vector<Violation>& v) {
        result.violations.insert(result.violations.end(), v.begin(), v.end());
    };
    add(check_system(system));
    add(check_ages(system, ages));
    add(check_costs(costs));
    if (result.violations.empty())
        result.bundle = ValidatedBundle{system, ages, costs};
    return result;
}

} // namespace failsim
