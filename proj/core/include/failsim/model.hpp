#pragma once

#include <optional>
#include <string>
#include <vector>

#include "failsim/stochastic.hpp"

namespace failsim
{

struct ComponentSpec
{
    std::string name;
    double soft_threshold = 1.0; ///< H: failure once total degradation reaches it
    double hard_threshold = 1.0; ///< D: failure once a single shock magnitude reaches it
    GammaProcessParams degradation;
    NormalParams shock_magnitude;
    /// Abrupt degradation added by each shock; empty means shocks cause no wear.
    std::optional<NormalParams> shock_damage;
};

enum class ShockMode
{
    poisson,     ///< homogeneous Poisson arrivals at lambda0 (Model 1)
    facilitation ///< count- and degradation-dependent arrivals (Model 2)
};

const char* to_string(ShockMode mode);
std::optional<ShockMode> parse_shock_mode(const std::string& text);

/// Series system: it survives only while every component survives.
struct SystemSpec
{
    std::vector<ComponentSpec> components;
    FacilitationParams shock_model;
    ShockMode mode = ShockMode::facilitation;

    /// Shock parameters actually in force; Poisson mode zeroes eta and gamma.
    FacilitationParams effective_shock_model() const;

    /// Same system under another shock mode.
    SystemSpec with_mode(ShockMode other) const;
};

/// Per-component degradation level at the start of the inspection interval.
struct InitialAges
{
    std::vector<double> u;
};

/// Expected pure degradation after `elapsed` time units; a convenience for
/// turning an elapsed age into an initial level, exact only in mean.
double expected_degradation_after(const ComponentSpec& component, double elapsed);

bool failed_at_start(const ComponentSpec& component, double u);
bool any_failed_at_start(const SystemSpec& system, const InitialAges& ages);

struct CostModel
{
    double inspection = 0.0;    ///< C_I, per inspection
    double replacement = 0.0;   ///< C_R, per replacement
    double downtime_rate = 0.0; ///< C_rho, per unit of downtime
};

/// Probabilities this close to 0 or 1 are snapped to the bound.
inline constexpr double probability_clamp = 1e-15;

/// P(W < D) for one shock: the component's chance of surviving it without hard failure.
double no_hard_failure_prob(const ComponentSpec& component);

struct Violation
{
    std::string path;    ///< field path, e.g. "components[1].H"
    std::string message;
};

struct ValidatedBundle
{
    SystemSpec system;
    InitialAges ages;
    CostModel costs;
};

/// Either the validated bundle or every violation found; never throws on bad input.
struct ValidationResult
{
    std::optional<ValidatedBundle> bundle;
    std::vector<Violation> violations;

    bool ok() const { return bundle.has_value(); }
};

std::vector<Violation> check_system(const SystemSpec& system);
std::vector<Violation> check_ages(const SystemSpec& system, const InitialAges& ages);
std::vector<Violation> check_costs(const CostModel& costs);

ValidationResult validate_system(const SystemSpec& system, const InitialAges& ages, const CostModel& costs);

} // namespace failsim
