#include <algorithm>
#include <cmath>
#include <limits>

#include "failsim/error.hpp"
#include "failsim/maintenance.hpp"

namespace failsim
{

std::vector<double> TauGrid::points() const
{
    require(tau_min > 0.0 && tau_max > tau_min && steps >= 2, "TauGrid: need 0 < tau_min < tau_max and steps >= 2");
    if (log_spaced)
        return failsim::log_spaced(tau_min, tau_max, steps);
    std::vector<double> out(steps);
    for (std::size_t k = 0; k < steps; ++k)
        out[k] = tau_min + (tau_max - tau_min) * static_cast<double>(k) / static_cast<double>(steps - 1);
    out.back() = tau_max;
    return out;
}

std::vector<Violation> check_tau_grid(const TauGrid& grid)
{
    std::vector<Violation> out;
    if (!(std::isfinite(grid.tau_min) && grid.tau_min > 0.0))
        out.push_back({"grids.tau_min", "tau_min must be > 0"});
    if (!(std::isfinite(grid.tau_max) && grid.tau_max > grid.tau_min))
        out.push_back({"grids.tau_max", "tau_max must exceed tau_min"});
    if (grid.steps < 2)
        out.push_back({"grids.tau_points", "need at least 2 tau points"});
    return out;
}

int model_number(ShockMode mode) { return mode == ShockMode::poisson ? 1 : 2; }

double expected_downtime(const ReliabilityCurve& curve, double tau)
{
    require(!curve.points.empty(), "expected_downtime: empty curve");
    require(tau >= 0.0 && tau <= curve.points.back().t * (1.0 + 1e-12),
            "expected_downtime: tau outside the curve grid");
    double t_prev = 0.0;
    double r_prev = curve.initial_reliability;
    double area = 0.0;
    for (const auto& p : curve.points)
    {
        if (p.t <= t_prev)
        {
            r_prev = p.reliability;
            continue;
        }
        if (p.t >= tau)
        {
            const double r_tau = r_prev + (tau - t_prev) / (p.t - t_prev) * (p.reliability - r_prev);
            area += 0.5 * ((1.0 - r_prev) + (1.0 - r_tau)) * (tau - t_prev);
            return area;
        }
        area += 0.5 * ((1.0 - r_prev) + (1.0 - p.reliability)) * (p.t - t_prev);
        t_prev = p.t;
        r_prev = p.reliability;
    }
    return area;
}

double cost_rate(double tau, const ReliabilityCurve& curve, const CostModel& costs)
{
    require(tau > 0.0, "cost_rate: tau must be > 0");
    const double r = curve.reliability_at(tau);
    return (costs.inspection + costs.replacement * (1.0 - r) + costs.downtime_rate * expected_downtime(curve, tau)) /
           tau;
}

MaintenanceResult optimize_on_curve(const ReliabilityCurve& curve, const InitialAges& ages, ShockMode mode,
                                    const CostModel& costs)
{
    require(!curve.points.empty(), "optimize: empty curve");
    MaintenanceResult result;
    result.ages = ages;
    result.mode = mode;
    result.failed_at_inspection = curve.initial_reliability == 0.0;
    result.records.reserve(curve.points.size());

    double best = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> best_index;
    for (const auto& p : curve.points)
    {
        TauRecord record{p.t, p.reliability, expected_downtime(curve, p.t), 0.0};
        record.cost_rate = (costs.inspection + costs.replacement * (1.0 - record.reliability) +
                            costs.downtime_rate * record.expected_downtime) /
                           record.tau;
        if (std::isfinite(record.cost_rate) && record.cost_rate < best)
        {
            best = record.cost_rate;
            best_index = result.records.size();
        }
        result.records.push_back(record);
    }
    if (!best_index)
        throw NoOptimumError("optimize: cost rate is not finite anywhere on the tau grid");

    // a failed component has to be replaced now; waiting only accrues downtime
    result.star_index = result.failed_at_inspection ? 0 : *best_index;
    result.tau_star = result.star().tau;
    result.cr_star = result.star().cost_rate;
    return result;
}

MaintenanceResult optimize_inspection(const SystemSpec& system, const InitialAges& ages, const CostModel& costs,
                                      const TauGrid& grid, const SimConfig& config)
{
    if (const auto bad = check_tau_grid(grid); !bad.empty())
        throw DomainError("optimize_inspection: " + bad.front().path + ": " + bad.front().message);

    SimConfig run = config;
    run.t_grid = grid.points();
    MaintenanceResult result =
        optimize_on_curve(estimate_reliability_curve(system, ages, run), ages, system.mode, costs);
    if (!grid.refine || result.failed_at_inspection)
        return result;

    auto midpoint = [&](double a, double b) { return grid.log_spaced ? std::sqrt(a * b) : 0.5 * (a + b); };
    const std::vector<double> coarse = run.t_grid;
    const std::size_t i = result.star_index;
    if (i > 0)
        run.t_grid.push_back(midpoint(coarse[i - 1], coarse[i]));
    if (i + 1 < coarse.size())
        run.t_grid.push_back(midpoint(coarse[i], coarse[i + 1]));
    std::sort(run.t_grid.begin(), run.t_grid.end());
    // same seed and horizon: the coarse points reproduce exactly
    return optimize_on_curve(estimate_reliability_curve(system, ages, run), ages, system.mode, costs);
}

std::vector<SweepRow> scenario_sweep(const SystemSpec& system, const std::vector<InitialAges>& scenarios,
                                     const CostModel& costs, const TauGrid& grid, const SimConfig& config,
                                     const std::vector<ShockMode>& modes)
{
    require(!scenarios.empty(), "scenario_sweep: need at least one scenario");
    require(!modes.empty(), "scenario_sweep: need at least one model");
    std::vector<SweepRow> rows;
    for (std::size_t s = 0; s < scenarios.size(); ++s)
    {
        for (ShockMode mode : modes)
        {
            SweepRow row;
            row.scenario = s + 1;
            row.ages = scenarios[s];
            row.mode = mode;
            if (const auto bad = check_ages(system, scenarios[s]); !bad.empty())
            {
                row.error = bad.front().path + ": " + bad.front().message;
                rows.push_back(std::move(row));
                continue;
            }
            try
            {
                row.result = optimize_inspection(system.with_mode(mode), scenarios[s], costs, grid, config);
            }
            catch (const Error& e)
            {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace failsim
