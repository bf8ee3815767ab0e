#pragma once

#include <string>

#include "failsim/model.hpp"

namespace failsim::cli
{

/**
 * The four dependence cases compared for the servo valve, built from `base`
 * (its eta and gamma are the "dependent" values):
 *   1  no shock damage, eta = 0, gamma = 0
 *   2  shock damage,    eta = 0, gamma = 0
 *   3  no shock damage, eta = 0, gamma = base
 *   4  shock damage,    eta = base, gamma = base
 * All use the facilitation count law.
 */
SystemSpec dependence_case(const SystemSpec& base, int which);

/// Copy of `base` in facilitation mode with `parameter` ("gamma" or "eta") set to `value`.
SystemSpec with_shock_parameter(const SystemSpec& base, const std::string& parameter, double value);

} // namespace failsim::cli
