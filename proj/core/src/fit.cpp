#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "failsim/error.hpp"
#include "failsim/stochastic.hpp"

namespace failsim
{

namespace
{

constexpr int max_iterations = 200;

struct ProfileScore
{
    double total_time = 0.0;
    double total_increment = 0.0;
    double weighted_log_increment = 0.0; // sum dt * log dx
    std::vector<IncrementObservation> positive;

    /// d/dalpha of the log-likelihood with beta profiled out.
    double score(double alpha) const
    {
        double s = total_time * std::log(alpha * total_time / total_increment) + weighted_log_increment;
        for (const auto& obs : positive)
            s -= obs.dt * boost::math::digamma(alpha * obs.dt);
        return s;
    }

    double curvature(double alpha) const
    {
        double h = total_time / alpha;
        for (const auto& obs : positive)
            h -= obs.dt * obs.dt * boost::math::trigamma(alpha * obs.dt);
        return h;
    }
};

} // namespace

LikelihoodPoint gamma_log_likelihood(std::span<const IncrementObservation> data, double alpha, double beta)
{
    require(alpha > 0.0 && beta > 0.0, "gamma_log_likelihood: alpha and beta must be positive");
    LikelihoodPoint point;
    for (const auto& obs : data)
    {
        if (!(obs.dx > 0.0))
            continue;
        const double shape = alpha * obs.dt;
        point.value += shape * std::log(beta) - std::lgamma(shape) + (shape - 1.0) * std::log(obs.dx) - beta * obs.dx;
        point.d_alpha += obs.dt * (std::log(beta) - boost::math::digamma(shape) + std::log(obs.dx));
        point.d_beta += shape / beta - obs.dx;
    }
    return point;
}

GammaFit fit_gamma_process(std::span<const IncrementObservation> data)
{
    require(data.size() >= 2, "fit_gamma_process: need at least 2 observations");

    ProfileScore profile;
    GammaFit fit;
    for (const auto& obs : data)
    {
        require(std::isfinite(obs.dt) && obs.dt > 0.0, "fit_gamma_process: every dt must be positive");
        require(std::isfinite(obs.dx) && obs.dx >= 0.0, "fit_gamma_process: every dx must be >= 0");
        if (obs.dx == 0.0)
        {
            ++fit.dropped_zeros;
            continue;
        }
        profile.positive.push_back(obs);
        profile.total_time += obs.dt;
        profile.total_increment += obs.dx;
        profile.weighted_log_increment += obs.dt * std::log(obs.dx);
    }
    fit.used = profile.positive.size();
    if (fit.used == 0)
        throw UnidentifiableError("fit_gamma_process: all increments are zero");

    // The score tends to sum dt*log(rate_k / mean rate) <= 0 as alpha -> inf, with
    // equality only when every dx/dt is the same: then no finite maximiser exists.
    const double mean_rate = profile.total_increment / profile.total_time;
    double dispersion = 0.0;
    double squared_residual = 0.0;
    for (const auto& obs : profile.positive)
    {
        dispersion += obs.dt * std::log((obs.dx / obs.dt) / mean_rate);
        squared_residual += (obs.dx - obs.dt * mean_rate) * (obs.dx - obs.dt * mean_rate) / obs.dt;
    }
    if (fit.used < 2 || dispersion > -1e-12 * profile.total_time)
        throw UnidentifiableError("fit_gamma_process: increments have zero sample variance (degenerate fit)");

    // moment start: Var(dx)/dt = alpha/beta^2, E(dx)/dt = alpha/beta
    double alpha = mean_rate * mean_rate * profile.total_time / squared_residual;
    if (!std::isfinite(alpha) || alpha <= 0.0)
        alpha = 1.0;

    double lo = alpha;
    double hi = alpha;
    for (int k = 0; profile.score(lo) <= 0.0; ++k)
    {
        lo *= 0.5;
        if (k > 1000)
            throw ConvergenceError("fit_gamma_process: could not bracket the score root", k, lo, profile.score(lo));
    }
    for (int k = 0; profile.score(hi) >= 0.0; ++k)
    {
        hi *= 2.0;
        if (k > 1000)
            throw ConvergenceError("fit_gamma_process: could not bracket the score root", k, hi, profile.score(hi));
    }

    const double score_tol = 1e-10 * std::max(1.0, profile.total_time);
    double score = profile.score(alpha);
    int iteration = 0;
    while (std::abs(score) > score_tol)
    {
        if (++iteration > max_iterations)
            throw ConvergenceError("fit_gamma_process: Newton iteration did not converge", iteration, alpha, score);
        if (score > 0.0)
            lo = alpha;
        else
            hi = alpha;
        double next = alpha - score / profile.curvature(alpha);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (next == alpha || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
            break;
        alpha = next;
        score = profile.score(alpha);
    }

    fit.alpha = alpha;
    fit.beta = alpha * profile.total_time / profile.total_increment;
    fit.iterations = iteration;
    const LikelihoodPoint at_optimum = gamma_log_likelihood(data, fit.alpha, fit.beta);
    fit.log_likelihood = at_optimum.value;
    fit.gradient_norm = std::hypot(at_optimum.d_alpha, at_optimum.d_beta);
    return fit;
}

std::vector<IncrementObservation> read_increments_csv(std::istream& in)
{
    auto trim = [](std::string s) {
        const auto first = s.find_first_not_of(" \t\r");
        const auto last = s.find_last_not_of(" \t\r");
        return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
    };

    std::string line;
    if (!std::getline(in, line) || trim(line) != "dt,dx")
        throw DomainError("increments CSV: expected header 'dt,dx' on line 1");

    std::vector<IncrementObservation> data;
    for (int line_no = 2; std::getline(in, line); ++line_no)
    {
        line = trim(line);
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw DomainError("increments CSV line " + std::to_string(line_no) + ": expected two fields");
        try
        {
            std::size_t used = 0;
            const std::string dt_text = trim(line.substr(0, comma));
            const std::string dx_text = trim(line.substr(comma + 1));
            IncrementObservation obs{std::stod(dt_text, &used), 0.0};
            if (used != dt_text.size())
                throw std::invalid_argument(dt_text);
            obs.dx = std::stod(dx_text, &used);
            if (used != dx_text.size())
                throw std::invalid_argument(dx_text);
            data.push_back(obs);
        }
        catch (const std::logic_error&)
        {
            throw DomainError("increments CSV line " + std::to_string(line_no) + ": non-numeric field");
        }
    }
    return data;
}

} // namespace failsim
