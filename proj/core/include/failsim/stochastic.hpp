#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "failsim/random.hpp"

namespace failsim
{

/**
 * Stationary gamma process X(t) with X(t) - X(s) ~ Gamma(shape = alpha*(t-s), rate = beta).
 *
 * `beta` is a rate (density proportional to x^{alpha t - 1} exp(-beta x)); the
 * corresponding scale is 1/beta. Mean degradation at t is alpha*t/beta.
 */
struct GammaProcessParams
{
    double alpha = 1.0;
    double beta = 1.0;

    double mean_at(double t) const { return alpha * t / beta; }
    double variance_at(double t) const { return alpha * t / (beta * beta); }
};

struct NormalParams
{
    double mean = 0.0;
    double std = 1.0;
};

/**
 * Shock arrival model. After i arrivals the intensity is (1 + eta*i) * lambda0(t)
 * with baseline lambda0(t) = lambda0 + gamma * X_S(t), X_S the system's total
 * degradation. eta = gamma = 0 is a homogeneous Poisson process.
 */
struct FacilitationParams
{
    double lambda0 = 1.0;
    double eta = 0.0;
    double gamma = 0.0;
};

/// One observed degradation increment `dx` over elapsed time `dt`.
struct IncrementObservation
{
    double dt = 1.0;
    double dx = 0.0;
};

// ---------------------------------------------------------------------------
// Gamma process
// ---------------------------------------------------------------------------

/// P(X <= x) for X ~ Gamma(shape, rate); 0 for x <= 0.
double gamma_cdf(double x, double shape, double rate);

/// Cumulative gamma-process values on a uniform grid of `steps` intervals.
struct SampledPath
{
    double step = 0.0;
    std::vector<double> values; ///< values[k] = X(k * step), values[0] = 0

    double horizon() const { return step * static_cast<double>(values.size() - 1); }
};

/**
 * Samples X on [0, horizon] with independent Gamma(alpha*dt, beta) increments.
 * horizon == 0 yields the single point X(0) = 0.
 */
SampledPath sample_gamma_path(const GammaProcessParams& params, double horizon, std::size_t steps,
                              RandomStream& rng);

// ---------------------------------------------------------------------------
// Sums of normal shock damages
// ---------------------------------------------------------------------------

/// Density of the m-fold sum; `point_mass` marks the m = 0 case (unit mass at 0).
struct DamageSumDensity
{
    bool point_mass = false;
    double density = 0.0;
};

DamageSumDensity damage_sum_density(int m, const NormalParams& damage, double y);

/// Half-width of the quadrature window, in standard deviations of the m-fold sum.
inline constexpr double damage_window_sigmas = 8.0;

/**
 * Integral of integrand(y) * f^{<m>}(y) over (-inf, upper]. For m = 0 this is
 * integrand(0) when 0 <= upper, else 0. For m >= 1 the range is clipped to
 * m*mean +/- 8*sqrt(m)*std and integrated by tanh-sinh quadrature to
 * `tolerance` relative to the L1 norm of the weighted integrand (absolute for
 * integrands bounded by 1, such as probabilities).
 */
double integrate_damage_sum(int m, const NormalParams& damage, const std::function<double(double)>& integrand,
                            double upper, double tolerance = 1e-10);

// ---------------------------------------------------------------------------
// Shock counts
// ---------------------------------------------------------------------------

/**
 * P(N = m) for the facilitation counting process given accumulated baseline
 * intensity Lambda0. eta > 0 gives the negative binomial law with r = 1/eta and
 * success probability 1 - exp(-eta*Lambda0); eta = 0 gives Poisson(Lambda0).
 */
double count_pmf(int m, double Lambda0, double eta);

/// P(N > max_count) for the same law, computed in closed form.
double count_tail_mass(int max_count, double Lambda0, double eta);

/**
 * count_pmf with the m-dependent log coefficients tabulated for one eta.
 * Used in inner loops; pmf(m, L) is identical to count_pmf(m, L, eta).
 */
class CountDistribution
{
  public:
    CountDistribution(double eta, int max_count);

    double eta() const { return eta_; }
    int max_count() const { return static_cast<int>(log_coeff_.size()) - 1; }

    double pmf(int m, double Lambda0) const;
    double tail_mass(double Lambda0) const { return count_tail_mass(max_count(), Lambda0, eta_); }

  private:
    double eta_;
    std::vector<double> log_coeff_;
};

/**
 * Piecewise-linear baseline intensity lambda0(t) on [times.front(), times.back()].
 * Its integral is piecewise quadratic and inverted exactly.
 */
class BaselineIntensity
{
  public:
    BaselineIntensity(std::vector<double> times, std::vector<double> rates);

    static BaselineIntensity constant(double rate, double horizon);
    static BaselineIntensity sampled(const std::function<double(double)>& rate, double horizon,
                                     std::size_t segments);

    double horizon() const { return times_.back(); }
    double rate(double t) const;
    /// Integral of the rate over [0, t].
    double cumulative(double t) const;
    /// Smallest t with cumulative(t) = target; target must lie within [0, cumulative(horizon)].
    double inverse(double target) const;

  private:
    std::vector<double> times_;
    std::vector<double> rates_;
    std::vector<double> cumulative_;
};

/**
 * Event times of the facilitation process in (0, horizon]; the hazard after i
 * events is (1 + eta*i) * baseline(t). Simulated by inverting the cumulative
 * baseline with exponential clocks.
 */
std::vector<double> simulate_count_process(double eta, const BaselineIntensity& baseline, double horizon,
                                           RandomStream& rng);

/// Constant-baseline overload: baseline = params.lambda0, gamma ignored.
std::vector<double> simulate_count_process(const FacilitationParams& params, double horizon, RandomStream& rng);

// ---------------------------------------------------------------------------
// Parameter estimation
// ---------------------------------------------------------------------------

struct GammaFit
{
    double alpha = 0.0;
    double beta = 0.0;
    double log_likelihood = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    std::size_t used = 0;          ///< increments entering the likelihood
    std::size_t dropped_zeros = 0; ///< dx == 0 increments excluded from it
};

/**
 * Maximum-likelihood (alpha, beta) for independent increments
 * dx_k ~ Gamma(alpha*dt_k, beta). beta is profiled out (beta = alpha*sum dt / sum dx)
 * and the concave profile score in alpha is solved by damped Newton with a
 * bisection fallback, started from moment matching.
 *
 * Throws UnidentifiableError when every increment is zero or every positive
 * increment has the same dx/dt ratio (the likelihood has no finite maximiser),
 * ConvergenceError when the iteration cap is reached.
 */
GammaFit fit_gamma_process(std::span<const IncrementObservation> data);

/// Log-likelihood and its gradient (d/dalpha, d/dbeta) over the positive increments.
struct LikelihoodPoint
{
    double value = 0.0;
    double d_alpha = 0.0;
    double d_beta = 0.0;
};
LikelihoodPoint gamma_log_likelihood(std::span<const IncrementObservation> data, double alpha, double beta);

/// Reads increments from CSV with header `dt,dx`.
std::vector<IncrementObservation> read_increments_csv(std::istream& in);

} // namespace failsim
