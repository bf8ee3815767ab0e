#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "failsim/error.hpp"
#include "failsim/stochastic.hpp"

namespace failsim
{

namespace
{

// Beyond this count the rising factorial is taken from lgamma differences.
constexpr int direct_sum_limit = 1000;

void check_count_args(double Lambda0, double eta)
{
    require(std::isfinite(Lambda0) && Lambda0 >= 0.0, "count_pmf: Lambda0 must be finite and >= 0");
    require(std::isfinite(eta) && eta >= 0.0, "count_pmf: eta must be finite and >= 0");
}

/// log C(1/eta + m - 1, m), or log(1/m!) when eta == 0.
double log_count_coefficient(int m, double eta)
{
    const double log_factorial = std::lgamma(m + 1.0);
    if (eta == 0.0)
        return -log_factorial;
    const double r = 1.0 / eta;
    if (m <= direct_sum_limit)
    {
        double log_rising = 0.0;
        for (int j = 0; j < m; ++j)
            log_rising += std::log(r + j);
        return log_rising - log_factorial;
    }
    return std::lgamma(r + m) - std::lgamma(r) - log_factorial;
}

double pmf_from_coefficient(double log_coeff, int m, double Lambda0, double eta)
{
    if (Lambda0 == 0.0)
        return m == 0 ? 1.0 : 0.0;
    if (m == 0)
        return std::exp(-Lambda0);
    // (exp(-eta L))^{1/eta} == exp(-L), so both laws share the exp(-L) factor
    const double log_success = eta == 0.0 ? std::log(Lambda0) : std::log(-std::expm1(-eta * Lambda0));
    return std::exp(log_coeff + m * log_success - Lambda0);
}

} // namespace

double count_pmf(int m, double Lambda0, double eta)
{
    check_count_args(Lambda0, eta);
    require(m >= 0, "count_pmf: m must be >= 0");
    return pmf_from_coefficient(log_count_coefficient(m, eta), m, Lambda0, eta);
}

double count_tail_mass(int max_count, double Lambda0, double eta)
{
    check_count_args(Lambda0, eta);
    require(max_count >= 0, "count_tail_mass: max_count must be >= 0");
    if (Lambda0 == 0.0)
        return 0.0;
    if (eta == 0.0)
        return boost::math::gamma_p(max_count + 1.0, Lambda0);
    // P(N <= M) = I_q(r, M + 1) with q = exp(-eta L)
    const double q = std::exp(-eta * Lambda0);
    if (q == 0.0)
        return 1.0;
    return boost::math::ibetac(1.0 / eta, max_count + 1.0, q);
}

CountDistribution::CountDistribution(double eta, int max_count) : eta_(eta)
{
    check_count_args(0.0, eta);
    require(max_count >= 0, "CountDistribution: max_count must be >= 0");
    log_coeff_.resize(static_cast<std::size_t>(max_count) + 1);
    for (int m = 0; m <= max_count; ++m)
        log_coeff_[static_cast<std::size_t>(m)] = log_count_coefficient(m, eta);
}

double CountDistribution::pmf(int m, double Lambda0) const
{
    return pmf_from_coefficient(log_coeff_[static_cast<std::size_t>(m)], m, Lambda0, eta_);
}

// ---------------------------------------------------------------------------

BaselineIntensity::BaselineIntensity(std::vector<double> times, std::vector<double> rates)
    : times_(std::move(times)), rates_(std::move(rates))
{
    require(times_.size() >= 2 && times_.size() == rates_.size(),
            "BaselineIntensity: need >= 2 knots with one rate each");
    require(times_.front() == 0.0, "BaselineIntensity: first knot must be t = 0");
    cumulative_.assign(times_.size(), 0.0);
    for (std::size_t k = 0; k < times_.size(); ++k)
    {
        require(std::isfinite(rates_[k]) && rates_[k] >= 0.0, "BaselineIntensity: rates must be finite and >= 0");
        if (k == 0)
            continue;
        require(times_[k] > times_[k - 1], "BaselineIntensity: knots must be strictly increasing");
        cumulative_[k] = cumulative_[k - 1] + 0.5 * (rates_[k] + rates_[k - 1]) * (times_[k] - times_[k - 1]);
    }
}

BaselineIntensity BaselineIntensity::constant(double rate, double horizon)
{
    require(horizon > 0.0, "BaselineIntensity: horizon must be positive");
    return BaselineIntensity({0.0, horizon}, {rate, rate});
}

BaselineIntensity BaselineIntensity::sampled(const std::function<double(double)>& rate, double horizon,
                                             std::size_t segments)
{
    require(horizon > 0.0 && segments >= 1, "BaselineIntensity: need positive horizon and >= 1 segment");
    std::vector<double> times(segments + 1);
    std::vector<double> rates(segments + 1);
    for (std::size_t k = 0; k <= segments; ++k)
    {
        times[k] = horizon * static_cast<double>(k) / static_cast<double>(segments);
        rates[k] = rate(times[k]);
    }
    times.back() = horizon;
    return BaselineIntensity(std::move(times), std::move(rates));
}

double BaselineIntensity::rate(double t) const
{
    require(t >= 0.0 && t <= horizon(), "BaselineIntensity: t outside [0, horizon]");
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t k = it == times_.end() ? times_.size() - 2 : static_cast<std::size_t>(it - times_.begin()) - 1;
    const double h = times_[k + 1] - times_[k];
    const double w = (t - times_[k]) / h;
    return rates_[k] + w * (rates_[k + 1] - rates_[k]);
}

double BaselineIntensity::cumulative(double t) const
{
    require(t >= 0.0 && t <= horizon(), "BaselineIntensity: t outside [0, horizon]");
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t k = it == times_.end() ? times_.size() - 2 : static_cast<std::size_t>(it - times_.begin()) - 1;
    const double s = t - times_[k];
    const double h = times_[k + 1] - times_[k];
    return cumulative_[k] + rates_[k] * s + 0.5 * (rates_[k + 1] - rates_[k]) * s * s / h;
}

double BaselineIntensity::inverse(double target) const
{
    require(target >= 0.0 && target <= cumulative_.back(), "BaselineIntensity: target outside integral range");
    // first knot whose cumulative reaches the target; the segment ends there
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
    const std::size_t end = static_cast<std::size_t>(it - cumulative_.begin());
    if (end == 0)
        return 0.0;
    const std::size_t k = end - 1;
    const double h = times_[k + 1] - times_[k];
    const double d = target - cumulative_[k];
    const double a = 0.5 * (rates_[k + 1] - rates_[k]) / h;
    const double b = rates_[k];
    // root of a s^2 + b s - d = 0 in the form that stays stable as a -> 0
    const double disc = std::max(b * b + 4.0 * a * d, 0.0);
    const double denom = b + std::sqrt(disc);
    const double s = denom > 0.0 ? 2.0 * d / denom : 0.0;
    return times_[k] + std::clamp(s, 0.0, h);
}

std::vector<double> simulate_count_process(double eta, const BaselineIntensity& baseline, double horizon,
                                           RandomStream& rng)
{
    require(std::isfinite(eta) && eta >= 0.0, "simulate_count_process: eta must be >= 0");
    require(horizon > 0.0 && horizon <= baseline.horizon(),
            "simulate_count_process: horizon must lie in (0, baseline horizon]");

    const double total = baseline.cumulative(horizon);
    std::vector<double> events;
    double clock = 0.0;
    for (int i = 0;; ++i)
    {
        clock += -std::log(rng.uniform()) / (1.0 + eta * i);
        if (clock > total)
            break;
        events.push_back(baseline.inverse(clock));
    }
    return events;
}

std::vector<double> simulate_count_process(const FacilitationParams& params, double horizon, RandomStream& rng)
{
    require(params.lambda0 >= 0.0, "simulate_count_process: lambda0 must be >= 0");
    return simulate_count_process(params.eta, BaselineIntensity::constant(params.lambda0, horizon), horizon, rng);
}

} // namespace failsim
