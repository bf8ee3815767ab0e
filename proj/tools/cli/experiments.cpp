#include "experiments.hpp"

#include "failsim/error.hpp"

namespace failsim::cli
{

SystemSpec dependence_case(const SystemSpec& base, int which)
{
    require(which >= 1 && which <= 4, "dependence_case: case must be 1..4");
    SystemSpec system = base;
    system.mode = ShockMode::facilitation;
    const bool damage = which == 2 || which == 4;
    if (!damage)
        for (auto& c : system.components)
            c.shock_damage.reset();
    system.shock_model.eta = which == 4 ? base.shock_model.eta : 0.0;
    system.shock_model.gamma = which >= 3 ? base.shock_model.gamma : 0.0;
    return system;
}

SystemSpec with_shock_parameter(const SystemSpec& base, const std::string& parameter, double value)
{
    SystemSpec system = base;
    system.mode = ShockMode::facilitation;
    if (parameter == "gamma")
        system.shock_model.gamma = value;
    else if (parameter == "eta")
        system.shock_model.eta = value;
    else
        throw DomainError("unknown shock parameter '" + parameter + "' (gamma or eta)");
    return system;
}

} // namespace failsim::cli
