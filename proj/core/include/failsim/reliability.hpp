#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "failsim/model.hpp"
#include "failsim/random.hpp"
#include "failsim/stochastic.hpp"

namespace failsim
{

struct SimConfig
{
    std::size_t replications = 10000;
    int max_shocks = 100;
    std::size_t path_steps = 1000; ///< gamma-path intervals over [0, t_grid.back()]
    std::vector<double> t_grid;
    std::uint64_t seed = 20200128;
    double truncation_tolerance = 1e-6;
    bool renormalize_pmf = false;
    std::size_t threads = 0; ///< 0: FAILSIM_THREADS or hardware concurrency
};

/**
 * Checks the config against the system. Besides the field invariants this
 * rejects `max_shocks` when the count-tail mass beyond it can exceed the
 * truncation tolerance at the last grid time, bounding the accumulated
 * intensity by lambda0*t + gamma*sum(H)*t.
 */
std::vector<Violation> check_sim_config(const SimConfig& config, const SystemSpec& system);

/// `points` log-spaced values in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, std::size_t points);

// ---------------------------------------------------------------------------
// Degradation paths and the shock intensity they drive
// ---------------------------------------------------------------------------

/**
 * Degradation of every component on a common time grid for one shock
 * scenario. A shock at time s appears as a repeated time s carrying the
 * pre- and post-jump levels, so piecewise-linear integration over `times`
 * treats jumps exactly.
 */
struct DegradationPath
{
    std::vector<double> times;
    std::vector<std::vector<double>> pure;  ///< [component][k] X_i, no shocks, no initial level
    std::vector<std::vector<double>> total; ///< [component][k] X_i + shock damage so far + u_i
    std::vector<double> system_total;       ///< [k] sum over components of total

    double horizon() const { return times.back(); }
};

/**
 * Assembles a DegradationPath from per-component pure paths on a uniform grid
 * (all with the same step), initial levels, and shocks at `shock_times` where
 * shock j adds damages[j][i] to component i.
 */
DegradationPath build_degradation_path(std::span<const SampledPath> pure, const InitialAges& ages,
                                       std::span<const double> shock_times,
                                       std::span<const std::vector<double>> damages);

/// Trapezoid approximation of the integral of lambda0 + gamma * X_S(v) over [0, t].
double integrate_baseline_intensity(const DegradationPath& path, const FacilitationParams& params, double t);

// ---------------------------------------------------------------------------
// Closed form (path-independent shock counts)
// ---------------------------------------------------------------------------

/**
 * Probability that a component with initial level u survives m shocks by t:
 * F_W(D)^m times the integral of G(H - y - u; alpha t, beta) against the
 * m-fold damage-sum density. 0 when u >= H.
 */
double component_survival_given_shocks(double t, double u, const ComponentSpec& component, int m);

/// Sum over m <= pmf.size()-1 of component_survival_given_shocks * pmf[m].
double component_reliability_closed(double t, double u, const ComponentSpec& component,
                                    std::span<const double> pmf);

/**
 * Series-system reliability when the count law does not depend on the path
 * (Poisson mode, or facilitation with gamma == 0). Terms are summed until the
 * count tail beyond them is below 1e-15 unless `max_shocks` is given.
 * Throws UnsupportedModeError when gamma > 0 in facilitation mode.
 */
double system_reliability_closed(double t, const InitialAges& ages, const SystemSpec& system,
                                 std::optional<int> max_shocks = std::nullopt);

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

enum class CurveMethod
{
    closed_form,
    monte_carlo
};

const char* to_string(CurveMethod method);

struct CurvePoint
{
    double t = 0.0;
    double reliability = 0.0;
    double standard_error = 0.0;
};

struct ReliabilityCurve
{
    std::vector<CurvePoint> points;
    CurveMethod method = CurveMethod::closed_form;
    std::uint64_t seed = 0;
    std::size_t replications = 0;
    double initial_reliability = 1.0; ///< R at t = 0 (0 when a component starts failed)
    double max_residual_mass = 0.0;   ///< largest count-tail mass beyond max_shocks seen
    double max_clamp_excess = 0.0;    ///< largest amount a replication exceeded 1 before clamping

    /// Linear interpolation of R, including the (0, initial_reliability) point.
    double reliability_at(double t) const;
};

ReliabilityCurve closed_form_curve(const SystemSpec& system, const InitialAges& ages, std::span<const double> t_grid,
                                   std::optional<int> max_shocks = std::nullopt);

/// Writes `t,R,stderr,method,seed,N` rows.
void write_curve_csv(std::ostream& out, const ReliabilityCurve& curve);

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

struct ReplicationOutput
{
    std::vector<double> reliability; ///< per grid time, clamped to [0, 1]
    double residual_mass = 0.0;      ///< count-tail mass beyond max_shocks at the last grid time
    double clamp_excess = 0.0;
};

/**
 * One Monte Carlo replication of the mutually dependent model.
 *
 * Pure degradation paths are sampled for every component; for each shock
 * count m <= M the first m of M shared damage draws are placed at times
 * U_j * t, the baseline intensity accumulated along the resulting total
 * degradation path gives Lambda0_m(t), and the replication value is
 *
 *     sum_m  A_m(t) * P(N(t) = m | Lambda0_m(t))
 *
 * where A_m(t) = prod_i F_Wi(D_i)^m * integral G_i(H_i - y - u_i) f_Yi^<m>(y) dy
 * is deterministic and tabulated once per engine.
 */
class ReplicationEngine
{
  public:
    ReplicationEngine(const SystemSpec& system, const InitialAges& ages, const SimConfig& config);

    const std::vector<double>& grid() const { return grid_; }

    /// Runs the replication whose random streams are keyed by `index`.
    ReplicationOutput run(std::uint64_t index) const;

    /// Runs a replication drawing from explicit path and shock streams.
    ReplicationOutput run(RandomStream path_rng, RandomStream shock_rng) const;

    /// Tabulated A_m(t_k).
    double survival_factor(int m, std::size_t k) const { return factor_[static_cast<std::size_t>(m) * grid_.size() + k]; }

    bool failed_at_start() const { return failed_at_start_; }

  private:
    SystemSpec system_;
    FacilitationParams shocks_;
    InitialAges ages_;
    std::vector<double> grid_;
    std::uint64_t seed_;
    int max_shocks_;
    std::size_t path_steps_;
    bool renormalize_;
    bool failed_at_start_;
    double initial_level_sum_;
    CountDistribution counts_;
    std::vector<double> factor_; ///< [m * K + k]
    std::vector<int> last_active_; ///< [k] largest m with a nonzero factor, -1 if none
};

/// Single replication for (system, ages, config) drawing from `rng`.
ReplicationOutput replication_reliability(const SystemSpec& system, const InitialAges& ages, const SimConfig& config,
                                          RandomStream& rng);

/**
 * Mean of N replications with per-time standard error sample_sd / sqrt(N).
 * Replication r uses streams keyed by (seed, r); partial sums are reduced in
 * fixed-size blocks in index order, so the result is bitwise independent of
 * the worker count.
 */
ReliabilityCurve estimate_reliability_curve(const SystemSpec& system, const InitialAges& ages,
                                            const SimConfig& config);

} // namespace failsim
