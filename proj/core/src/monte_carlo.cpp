#include <algorithm>
#include <cmath>
#include <random>

#include "failsim/error.hpp"
#include "failsim/parallel.hpp"
#include "failsim/reliability.hpp"

namespace failsim
{

namespace
{

constexpr std::size_t block_size = 64;

void check_engine_inputs(const SystemSpec& system, const InitialAges& ages, const SimConfig& config)
{
    require(!system.components.empty(), "Monte Carlo: system has no components");
    require(ages.u.size() == system.components.size(), "Monte Carlo: one initial level per component");
    require(!config.t_grid.empty(), "Monte Carlo: empty time grid");
    for (std::size_t k = 0; k < config.t_grid.size(); ++k)
        require(config.t_grid[k] > 0.0 && (k == 0 || config.t_grid[k] > config.t_grid[k - 1]),
                "Monte Carlo: time grid must be positive and strictly increasing");
    require(config.max_shocks >= 1, "Monte Carlo: max_shocks must be >= 1");
    require(config.path_steps >= 1, "Monte Carlo: path_steps must be >= 1");
    require(config.replications >= 1, "Monte Carlo: need at least one replication");
}

double checked_eta(const SystemSpec& system, const InitialAges& ages, const SimConfig& config)
{
    check_engine_inputs(system, ages, config);
    return system.effective_shock_model().eta;
}

/// Per-time running mean and squared deviations of a block of replications.
struct BlockStats
{
    std::size_t count = 0;
    std::vector<double> mean;
    std::vector<double> m2;
    double residual_mass = 0.0;
    double clamp_excess = 0.0;

    void add(const ReplicationOutput& out)
    {
        if (mean.empty())
        {
            mean.assign(out.reliability.size(), 0.0);
            m2.assign(out.reliability.size(), 0.0);
        }
        ++count;
        const double n = static_cast<double>(count);
        for (std::size_t k = 0; k < mean.size(); ++k)
        {
            const double delta = out.reliability[k] - mean[k];
            mean[k] += delta / n;
            m2[k] += delta * (out.reliability[k] - mean[k]);
        }
        residual_mass = std::max(residual_mass, out.residual_mass);
        clamp_excess = std::max(clamp_excess, out.clamp_excess);
    }

    // pairwise update (Chan et al.); applied in block order for reproducibility
    void merge(const BlockStats& other)
    {
        if (other.count == 0)
            return;
        if (count == 0)
        {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(other.count);
        const double n = na + nb;
        for (std::size_t k = 0; k < mean.size(); ++k)
        {
            const double delta = other.mean[k] - mean[k];
            mean[k] += delta * nb / n;
            m2[k] += other.m2[k] + delta * delta * na * nb / n;
        }
        count += other.count;
        residual_mass = std::max(residual_mass, other.residual_mass);
        clamp_excess = std::max(clamp_excess, other.clamp_excess);
    }
};

} // namespace

ReplicationEngine::ReplicationEngine(const SystemSpec& system, const InitialAges& ages, const SimConfig& config)
    : system_(system), shocks_(system.effective_shock_model()), ages_(ages), grid_(config.t_grid),
      seed_(config.seed), max_shocks_(config.max_shocks), path_steps_(config.path_steps),
      renormalize_(config.renormalize_pmf), failed_at_start_(false), initial_level_sum_(0.0),
      counts_(checked_eta(system, ages, config), config.max_shocks)
{
    failed_at_start_ = any_failed_at_start(system_, ages_);
    for (double u : ages_.u)
        initial_level_sum_ += u;

    const std::size_t K = grid_.size();
    const std::size_t rows = static_cast<std::size_t>(max_shocks_) + 1;
    factor_.assign(rows * K, failed_at_start_ ? 0.0 : 1.0);
    last_active_.assign(K, -1);
    if (failed_at_start_)
        return;

    // grid columns are independent, so workers fill whole columns
    parallel_for(K, resolve_thread_count(config.threads), [&](std::size_t k) {
        for (std::size_t i = 0; i < system_.components.size(); ++i)
        {
            const auto& component = system_.components[i];
            for (int m = 0; m <= max_shocks_; ++m)
            {
                double& cell = factor_[static_cast<std::size_t>(m) * K + k];
                if (cell == 0.0)
                    continue;
                const double s = component_survival_given_shocks(grid_[k], ages_.u[i], component, m);
                cell *= s;
                if (s == 0.0 && m > 0 && component.shock_damage && component.shock_damage->mean > 0.0)
                {
                    // survival only shrinks with more shocks once the damage window is exhausted
                    const auto& y = *component.shock_damage;
                    const double lo = m * y.mean - damage_window_sigmas * std::sqrt(static_cast<double>(m)) * y.std;
                    if (lo >= component.soft_threshold - ages_.u[i])
                    {
                        for (int rest = m + 1; rest <= max_shocks_; ++rest)
                            factor_[static_cast<std::size_t>(rest) * K + k] = 0.0;
                        break;
                    }
                }
            }
        }
    });
    for (std::size_t k = 0; k < K; ++k)
        for (int m = max_shocks_; m >= 0; --m)
            if (factor_[static_cast<std::size_t>(m) * K + k] > 0.0)
            {
                last_active_[k] = m;
                break;
            }
}

ReplicationOutput ReplicationEngine::run(std::uint64_t index) const
{
    const RandomStream base(seed_, index);
    return run(base.split(0), base.split(1));
}

ReplicationOutput ReplicationEngine::run(RandomStream path_rng, RandomStream shock_rng) const
{
    const std::size_t K = grid_.size();
    const std::size_t n = system_.components.size();
    const double horizon = grid_.back();

    // With gamma == 0 the count law ignores the path, every replication
    // returns the same values, and no draws are needed.
    const bool path_dependent = shocks_.gamma > 0.0;

    // 1. pure degradation paths; only their sum enters the shock intensity
    std::vector<double> node_sum(path_steps_ + 1, 0.0);
    const double step = horizon / static_cast<double>(path_steps_);
    for (std::size_t i = 0; path_dependent && i < n; ++i)
    {
        const SampledPath path = sample_gamma_path(system_.components[i].degradation, horizon, path_steps_, path_rng);
        for (std::size_t j = 0; j <= path_steps_; ++j)
            node_sum[j] += path.values[j];
    }
    std::vector<double> node_area(path_steps_ + 1, 0.0);
    for (std::size_t j = 1; j <= path_steps_; ++j)
        node_area[j] = node_area[j - 1] + 0.5 * (node_sum[j - 1] + node_sum[j]) * step;

    // 2. shock damages and arrival fractions; shock j at time U_j * t adds
    //    S_j * (1 - U_j) * t to the area under the total degradation by t
    const auto M = static_cast<std::size_t>(max_shocks_);
    std::vector<double> jump_area(M + 1, 0.0);
    std::normal_distribution<double> standard_normal(0.0, 1.0);
    for (std::size_t j = 0; path_dependent && j < M; ++j)
    {
        double damage = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double z = standard_normal(shock_rng);
            if (const auto& y = system_.components[i].shock_damage)
                damage += y->mean + y->std * z;
        }
        const double arrival = shock_rng.uniform();
        jump_area[j + 1] = jump_area[j] + damage * (1.0 - arrival);
    }
    const double max_jump_area = *std::max_element(jump_area.begin(), jump_area.end());

    // 3. per grid time: accumulate A_m(t) * P(N(t) = m | Lambda0_m(t))
    ReplicationOutput out;
    out.reliability.assign(K, 0.0);
    auto pure_area_at = [&](double t) {
        const double pos = std::min(t / step, static_cast<double>(path_steps_));
        const auto j = std::min(static_cast<std::size_t>(pos), path_steps_ - 1);
        const double s = t - static_cast<double>(j) * step;
        const double x_t = node_sum[j] + (node_sum[j + 1] - node_sum[j]) * (s / step);
        return node_area[j] + 0.5 * (node_sum[j] + x_t) * s;
    };

    double last_base = 0.0;
    for (std::size_t k = 0; k < K; ++k)
    {
        const double t = grid_[k];
        double base = shocks_.lambda0 * t;
        if (path_dependent)
            base += shocks_.gamma * (pure_area_at(t) + t * initial_level_sum_);
        last_base = base;

        auto Lambda = [&](int m) {
            if (!path_dependent)
                return base;
            return std::max(0.0, base + shocks_.gamma * t * jump_area[static_cast<std::size_t>(m)]);
        };

        double value = 0.0;
        for (int m = 0; m <= last_active_[k]; ++m)
        {
            const double a = factor_[static_cast<std::size_t>(m) * K + k];
            if (a != 0.0)
                value += a * counts_.pmf(m, Lambda(m));
        }
        if (renormalize_)
        {
            double mass = 0.0;
            for (int m = 0; m <= max_shocks_; ++m)
                mass += counts_.pmf(m, Lambda(m));
            if (mass > 0.0)
                value /= mass;
        }
        if (value > 1.0)
        {
            out.clamp_excess = std::max(out.clamp_excess, value - 1.0);
            value = 1.0;
        }
        out.reliability[k] = std::max(value, 0.0);
    }

    const double Lambda_max =
        path_dependent ? std::max(0.0, last_base + shocks_.gamma * horizon * max_jump_area) : last_base;
    out.residual_mass = counts_.tail_mass(Lambda_max);
    return out;
}

ReplicationOutput replication_reliability(const SystemSpec& system, const InitialAges& ages, const SimConfig& config,
                                          RandomStream& rng)
{
    const ReplicationEngine engine(system, ages, config);
    return engine.run(rng.split(0), rng.split(1));
}

ReliabilityCurve estimate_reliability_curve(const SystemSpec& system, const InitialAges& ages,
                                            const SimConfig& config)
{
    const ReplicationEngine engine(system, ages, config);
    const std::size_t N = config.replications;
    const std::size_t blocks = (N + block_size - 1) / block_size;
    std::vector<BlockStats> stats(blocks);

    parallel_for(blocks, resolve_thread_count(config.threads), [&](std::size_t b) {
        const std::size_t first = b * block_size;
        const std::size_t last = std::min(N, first + block_size);
        for (std::size_t r = first; r < last; ++r)
            stats[b].add(engine.run(r));
    });

    BlockStats total;
    for (const auto& block : stats)
        total.merge(block);

    ReliabilityCurve curve;
    curve.method = CurveMethod::monte_carlo;
    curve.seed = config.seed;
    curve.replications = N;
    curve.initial_reliability = engine.failed_at_start() ? 0.0 : 1.0;
    curve.max_residual_mass = total.residual_mass;
    curve.max_clamp_excess = total.clamp_excess;
    curve.points.reserve(engine.grid().size());
    const double n = static_cast<double>(N);
    for (std::size_t k = 0; k < engine.grid().size(); ++k)
    {
        const double sd = N > 1 ? std::sqrt(std::max(total.m2[k], 0.0) / (n - 1.0)) : 0.0;
        curve.points.push_back({engine.grid()[k], std::clamp(total.mean[k], 0.0, 1.0), sd / std::sqrt(n)});
    }
    return curve;
}

} // namespace failsim
