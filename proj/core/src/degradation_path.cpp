#include <algorithm>
#include <cmath>
#include <numeric>

#include "failsim/error.hpp"
#include "failsim/reliability.hpp"

namespace failsim
{

std::vector<double> log_spaced(double lo, double hi, std::size_t points)
{
    require(lo > 0.0 && hi > lo, "log_spaced: need 0 < lo < hi");
    require(points >= 2, "log_spaced: need at least 2 points");
    std::vector<double> out(points);
    const double ratio = std::log(hi / lo);
    for (std::size_t k = 0; k < points; ++k)
        out[k] = lo * std::exp(ratio * static_cast<double>(k) / static_cast<double>(points - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<Violation> check_sim_config(const SimConfig& config, const SystemSpec& system)
{
    std::vector<Violation> out;
    if (config.replications < 1)
        out.push_back({"sim.replications", "need at least one replication"});
    if (config.max_shocks < 1)
        out.push_back({"sim.max_shocks", "max_shocks must be >= 1"});
    if (config.path_steps < 1)
        out.push_back({"sim.path_steps", "path_steps must be >= 1"});
    if (!(config.truncation_tolerance > 0.0 && config.truncation_tolerance < 1.0))
        out.push_back({"sim.truncation_tol", "truncation tolerance must lie in (0, 1)"});
    if (config.t_grid.empty())
        out.push_back({"grids.t", "time grid is empty"});
    for (std::size_t k = 0; k < config.t_grid.size(); ++k)
    {
        const double t = config.t_grid[k];
        if (!(std::isfinite(t) && t > 0.0) || (k > 0 && !(t > config.t_grid[k - 1])))
        {
            out.push_back({"grids.t", "time grid must be positive and strictly increasing"});
            break;
        }
    }
    if (!out.empty())
        return out;

    const FacilitationParams shocks = system.effective_shock_model();
    double threshold_sum = 0.0;
    for (const auto& c : system.components)
        threshold_sum += c.soft_threshold;
    const double t = config.t_grid.back();
    const double bound = shocks.lambda0 * t + shocks.gamma * threshold_sum * t;
    const double tail = count_tail_mass(config.max_shocks, bound, shocks.eta);
    if (!(tail < config.truncation_tolerance))
        out.push_back({"sim.max_shocks", "count tail beyond max_shocks at t=" + std::to_string(t) + " is " +
                                             std::to_string(tail) + ", above the truncation tolerance"});
    return out;
}

DegradationPath build_degradation_path(std::span<const SampledPath> pure, const InitialAges& ages,
                                       std::span<const double> shock_times,
                                       std::span<const std::vector<double>> damages)
{
    require(!pure.empty(), "build_degradation_path: no components");
    require(ages.u.size() == pure.size(), "build_degradation_path: one initial level per component");
    require(shock_times.size() == damages.size(), "build_degradation_path: one damage vector per shock");
    const std::size_t n = pure.size();
    const std::size_t nodes = pure.front().values.size();
    const double step = pure.front().step;
    for (const auto& p : pure)
        require(p.values.size() == nodes && p.step == step, "build_degradation_path: pure paths must share a grid");
    for (const auto& d : damages)
        require(d.size() == n, "build_degradation_path: one damage per component per shock");
    const double horizon = pure.front().horizon();

    std::vector<std::size_t> order(shock_times.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return shock_times[a] < shock_times[b]; });
    for (double s : shock_times)
        require(s >= 0.0 && s <= horizon, "build_degradation_path: shock time outside the path");

    auto pure_at = [&](std::size_t i, double t) {
        if (nodes == 1)
            return pure[i].values[0];
        const double pos = std::min(t / step, static_cast<double>(nodes - 1));
        const auto j = std::min(static_cast<std::size_t>(pos), nodes - 2);
        const double w = pos - static_cast<double>(j);
        return pure[i].values[j] + w * (pure[i].values[j + 1] - pure[i].values[j]);
    };

    DegradationPath path;
    path.pure.assign(n, {});
    path.total.assign(n, {});
    std::vector<double> damage_so_far(n, 0.0);

    auto emit = [&](double t) {
        path.times.push_back(t);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double x = pure_at(i, t);
            path.pure[i].push_back(x);
            path.total[i].push_back(x + damage_so_far[i] + ages.u[i]);
            sum += path.total[i].back();
        }
        path.system_total.push_back(sum);
    };

    std::size_t next_shock = 0;
    for (std::size_t j = 0; j < nodes; ++j)
    {
        const double t_node = static_cast<double>(j) * step;
        while (next_shock < order.size() && shock_times[order[next_shock]] <= t_node)
        {
            const double s = shock_times[order[next_shock]];
            emit(s);
            for (std::size_t i = 0; i < n; ++i)
                damage_so_far[i] += damages[order[next_shock]][i];
            emit(s);
            ++next_shock;
        }
        if (path.times.empty() || path.times.back() < t_node)
            emit(t_node);
    }
    return path;
}

double integrate_baseline_intensity(const DegradationPath& path, const FacilitationParams& params, double t)
{
    require(!path.times.empty(), "integrate_baseline_intensity: empty path");
    require(t >= 0.0, "integrate_baseline_intensity: t must be >= 0");
    require(t <= path.horizon() * (1.0 + 1e-12), "integrate_baseline_intensity: t beyond path horizon");

    double area = 0.0;
    for (std::size_t k = 1; k < path.times.size(); ++k)
    {
        const double t0 = path.times[k - 1];
        const double t1 = path.times[k];
        if (t0 >= t)
            break;
        if (t1 <= t)
        {
            area += 0.5 * (path.system_total[k - 1] + path.system_total[k]) * (t1 - t0);
            continue;
        }
        const double w = (t - t0) / (t1 - t0);
        const double at_t = path.system_total[k - 1] + w * (path.system_total[k] - path.system_total[k - 1]);
        area += 0.5 * (path.system_total[k - 1] + at_t) * (t - t0);
        break;
    }
    return params.lambda0 * t + params.gamma * area;
}

} // namespace failsim
