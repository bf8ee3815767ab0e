#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "failsim/model.hpp"
#include "failsim/reliability.hpp"

namespace failsim
{

/// Candidate inspection intervals.
struct TauGrid
{
    double tau_min = 0.05;
    double tau_max = 20.0;
    std::size_t steps = 200;
    bool refine = false;     ///< add midpoints on both sides of the coarse minimiser
    bool log_spaced = true;

    std::vector<double> points() const;
};

std::vector<Violation> check_tau_grid(const TauGrid& grid);

struct TauRecord
{
    double tau = 0.0;
    double reliability = 0.0;       ///< R(tau; u)
    double expected_downtime = 0.0; ///< E[rho] over [0, tau]
    double cost_rate = 0.0;         ///< CR(tau; u)
};

struct MaintenanceResult
{
    InitialAges ages;
    ShockMode mode = ShockMode::facilitation;
    std::vector<TauRecord> records;
    std::size_t star_index = 0;
    double tau_star = 0.0;
    double cr_star = 0.0;
    /// Some component was already failed at the start; the policy is to act at tau_min.
    bool failed_at_inspection = false;

    const TauRecord& star() const { return records.at(star_index); }
};

/// Model number used in tables: 1 for Poisson arrivals, 2 for the dependent model.
int model_number(ShockMode mode);

/**
 * Expected time the system spends failed before an inspection at tau:
 * the integral of 1 - R(t; u) over [0, tau], trapezoid on the curve grid with
 * (0, R(0)) prepended. Throws DomainError when tau lies outside [0, last grid time].
 */
double expected_downtime(const ReliabilityCurve& curve, double tau);

/// (C_I + C_R (1 - R(tau)) + C_rho E[rho]) / tau.
double cost_rate(double tau, const ReliabilityCurve& curve, const CostModel& costs);

/**
 * Cost-rate minimising inspection interval for one age vector. A single
 * Monte Carlo curve over the tau grid (one seed, one set of replications)
 * serves every candidate, so CR is compared under common random numbers.
 * Ties go to the smaller tau.
 */
MaintenanceResult optimize_inspection(const SystemSpec& system, const InitialAges& ages, const CostModel& costs,
                                      const TauGrid& grid, const SimConfig& config);

/// Same, on a curve the caller already has (its grid is the candidate set).
MaintenanceResult optimize_on_curve(const ReliabilityCurve& curve, const InitialAges& ages, ShockMode mode,
                                    const CostModel& costs);

struct SweepRow
{
    std::size_t scenario = 0; ///< 1-based, in input order
    InitialAges ages;
    ShockMode mode = ShockMode::facilitation;
    std::optional<MaintenanceResult> result;
    std::string error; ///< set when this scenario failed; the sweep carries on
};

/**
 * optimize_inspection for every scenario under every requested mode, all with
 * the same master seed. Failures are captured per row.
 */
std::vector<SweepRow> scenario_sweep(const SystemSpec& system, const std::vector<InitialAges>& scenarios,
                                     const CostModel& costs, const TauGrid& grid, const SimConfig& config,
                                     const std::vector<ShockMode>& modes);

/// `scenario,u_1..u_n,model,tau_star,cr_star,R_at_tau,E_rho`; failed rows are skipped.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, std::size_t components);

/// Per-tau diagnostics: `scenario,model,tau,R,E_rho,CR`.
void write_sweep_diagnostics_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Reads scenarios from CSV with header `scenario,u_1,...,u_n`.
std::vector<InitialAges> read_scenarios_csv(std::istream& in);

/// Lossless CSV form of a MaintenanceResult.
void write_maintenance_result(std::ostream& out, const MaintenanceResult& result);
MaintenanceResult read_maintenance_result(std::istream& in);

} // namespace failsim
