// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
//
//   failsim_acceptance            run every criterion
//   failsim_acceptance --only N   run criterion N
//
// Exit status is 0 only when every criterion that ran passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <unistd.h>

#include "commands.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "failsim/maintenance.hpp"
#include "failsim/reliability.hpp"
#include "failsim/stochastic.hpp"

using namespace failsim;

namespace
{

const std::filesystem::path data_dir = FAILSIM_DATA_DIR;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

struct Criterion
{
    int id;
    std::string title;
    double time_limit_s; ///< 0: no runtime bound
    std::function<Outcome()> run;
};

cli::ExperimentConfig servo_valve_config()
{
    return cli::load_config(data_dir / "servo_valve.cfg");
}

double poisson_pmf(int m, double lambda)
{
    return std::exp(m * std::log(lambda) - lambda - std::lgamma(m + 1.0));
}

/// Worst reversal of `lower` above `upper`, allowing 3 standard errors (the
/// larger of the two curves') plus 1e-12 for rounding where both SEs vanish.
struct Ordering
{
    std::size_t violations = 0;
    double worst = -1.0;
    double worst_t = 0.0;
};

Ordering compare(const std::vector<CurvePoint>& upper, const std::vector<CurvePoint>& lower)
{
    Ordering o;
    for (std::size_t k = 0; k < upper.size(); ++k)
    {
        const double se = std::max(upper[k].standard_error, lower[k].standard_error);
        const double excess = lower[k].reliability - upper[k].reliability;
        if (excess > 3.0 * se + 1e-12)
            ++o.violations;
        if (excess > o.worst)
        {
            o.worst = excess;
            o.worst_t = upper[k].t;
        }
    }
    return o;
}

std::string describe(const char* what, const Ordering& o, std::size_t points)
{
    return fmt::format("{}: {}/{} points reversed beyond 3 SE, largest reversal {:.3g} at t={:.4g}", what,
                       o.violations, points, o.worst, o.worst_t);
}

/// Pointwise max of two curves, carrying the SE of whichever is larger.
std::vector<CurvePoint> pointwise_max(const ReliabilityCurve& a, const ReliabilityCurve& b)
{
    std::vector<CurvePoint> out = a.points;
    for (std::size_t k = 0; k < out.size(); ++k)
        if (b.points[k].reliability > out[k].reliability)
            out[k] = b.points[k];
    return out;
}

// ---------------------------------------------------------------------------

Outcome pmf_normalization()
{
    double lowest = 2.0, highest = 0.0;
    std::string at;
    for (double lambda : {0.1, 1.0, 10.0})
        for (double eta : {0.01, 0.2, 1.0})
        {
            double sum = 0.0;
            for (int m = 0; m <= 500; ++m)
                sum += count_pmf(m, lambda, eta);
            if (sum < lowest)
                at = fmt::format("Lambda0={}, eta={}", lambda, eta);
            lowest = std::min(lowest, sum);
            highest = std::max(highest, sum);
        }
    const bool pass = lowest >= 1.0 - 1e-9 && highest <= 1.0 + 1e-12;
    return {pass, fmt::format("sums in [{:.12g}, {:.17g}], lowest at {}", lowest, highest, at)};
}

Outcome poisson_limit()
{
    double gap = 0.0;
    for (int m = 0; m <= 60; ++m)
        gap = std::max(gap, std::abs(count_pmf(m, 3.0, 1e-6) - poisson_pmf(m, 3.0)));
    return {gap < 1e-4, fmt::format("sup gap {:.3g} (limit 1e-4)", gap)};
}

Outcome counting_process()
{
    const FacilitationParams params{1e-4, 0.2, 0.0};
    const double horizon = 1e4; // Lambda0 = 1
    const std::size_t runs = 100000;
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t r = 0; r < runs; ++r)
    {
        RandomStream rng(2024, r);
        ++counts[simulate_count_process(params, horizon, rng).size()];
    }
    double sup = 0.0;
    const std::size_t top = counts.rbegin()->first;
    for (std::size_t m = 0; m <= top + 5; ++m)
    {
        const double empirical = static_cast<double>(counts[m]) / runs;
        sup = std::max(sup, std::abs(empirical - count_pmf(static_cast<int>(m), 1.0, 0.2)));
    }
    const double p2 = count_pmf(2, 1.0, 0.2);
    const bool frozen = std::abs(p2 - 0.18131971932966908) < 1e-12;
    return {sup < 0.005 && frozen,
            fmt::format("sup distance {:.4f} (limit 0.005); P(N=2) = {:.6f}, empirical {:.6f}", sup, p2,
                        static_cast<double>(counts[2]) / runs)};
}

Outcome closed_vs_monte_carlo()
{
    auto config = servo_valve_config();
    config.sim.t_grid = log_spaced(config.grid.t_min, config.grid.t_max, 20);
    // At gamma = 0 the hybrid estimator draws nothing that affects its value,
    // so agreement is expected to rounding; the unit tests compare against
    // direct simulation for an independent check.
    double worst = -1.0, largest_gap = 0.0;
    std::string at;
    for (double eta : {0.0, 0.2})
        for (const InitialAges& ages : {InitialAges{{0.0, 0.0}}, InitialAges{{2.0, 3.0}}})
        {
            auto system = config.system;
            system.shock_model.eta = eta;
            system.shock_model.gamma = 0.0;
            const auto mc = estimate_reliability_curve(system, ages, config.sim);
            const auto closed = closed_form_curve(system, ages, config.sim.t_grid);
            for (std::size_t k = 0; k < mc.points.size(); ++k)
            {
                const double allowed = std::max(3.0 * mc.points[k].standard_error, 1e-3);
                const double gap = std::abs(mc.points[k].reliability - closed.points[k].reliability);
                largest_gap = std::max(largest_gap, gap);
                const double ratio = gap / allowed;
                if (ratio > worst)
                    at = fmt::format("eta={} u=({},{}) t={:.4g}", eta, ages.u[0], ages.u[1], mc.points[k].t);
                worst = std::max(worst, ratio);
            }
        }
    return {worst <= 1.0, fmt::format("largest |MC - closed| / max(3 SE, 1e-3) = {:.3g} at {}; largest |MC - closed| = {:.3g}",
                                      worst, at, largest_gap)};
}

Outcome model_ordering(bool renormalize)
{
    auto config = servo_valve_config();
    config.sim.renormalize_pmf = renormalize;
    const auto m1 = estimate_reliability_curve(config.system.with_mode(ShockMode::poisson), config.ages, config.sim);
    const auto m2 = estimate_reliability_curve(config.system, config.ages, config.sim);
    const auto o = compare(m1.points, m2.points);
    return {o.violations == 0, describe("model 2 above model 1", o, m1.points.size())};
}

Outcome gamma_sensitivity(bool renormalize)
{
    auto config = servo_valve_config();
    config.sim.renormalize_pmf = renormalize;
    std::vector<ReliabilityCurve> curves;
    for (double gamma : {0.0, 0.001, 0.005})
        curves.push_back(estimate_reliability_curve(cli::with_shock_parameter(config.system, "gamma", gamma),
                                                    config.ages, config.sim));
    const auto a = compare(curves[0].points, curves[1].points);
    const auto b = compare(curves[1].points, curves[2].points);
    return {a.violations == 0 && b.violations == 0,
            describe("gamma 0.001 above 0", a, curves[0].points.size()) + "; " +
                describe("gamma 0.005 above 0.001", b, curves[0].points.size())};
}

Outcome four_cases(bool renormalize)
{
    auto config = servo_valve_config();
    config.sim.renormalize_pmf = renormalize;
    std::vector<ReliabilityCurve> c;
    for (int which = 1; which <= 4; ++which)
        c.push_back(estimate_reliability_curve(cli::dependence_case(config.system, which), config.ages, config.sim));
    const auto middle = pointwise_max(c[1], c[2]);
    const auto top = compare(c[0].points, middle);
    const auto bottom = compare(middle, c[3].points);
    const auto n = c[0].points.size();
    return {top.violations == 0 && bottom.violations == 0,
            describe("max(case 2, case 3) above case 1", top, n) + "; " +
                describe("case 4 above max(case 2, case 3)", bottom, n)};
}

Outcome age_scenario_orderings()
{
    const auto config = servo_valve_config();
    const std::vector<InitialAges> scenarios = {
        {{0, 0}},   {{1, 1}},     {{2, 2}},   {{4, 4}},     {{4.8, 5.5}}, // nested
        {{0.5, 0.5}}, {{1, 0.5}}, {{0.5, 1}}, {{2.5, 0.5}}, {{0.5, 3}}};
    const auto rows = scenario_sweep(config.system, scenarios, config.costs, config.tau, config.sim,
                                     {ShockMode::poisson, ShockMode::facilitation});
    std::map<std::pair<std::size_t, int>, std::size_t> star; // (scenario, model) -> grid index
    std::map<std::pair<std::size_t, int>, double> tau;
    for (const auto& row : rows)
    {
        if (!row.result)
            return {false, fmt::format("scenario {} failed: {}", row.scenario, row.error)};
        star[{row.scenario, model_number(row.mode)}] = row.result->star_index;
        tau[{row.scenario, model_number(row.mode)}] = row.result->tau_star;
    }

    std::vector<std::string> problems;
    for (int model : {1, 2})
    {
        std::string chain;
        for (std::size_t s = 1; s <= 5; ++s)
        {
            chain += fmt::format("{}{:.4g}", s > 1 ? " > " : "", tau[{s, model}]);
            if (s > 1 && !(tau[{s, model}] < tau[{s - 1, model}]))
                problems.push_back(fmt::format("model {} not strictly decreasing at nested step {}", model, s));
        }
        problems.push_back(fmt::format("model {} nested tau*: {}", model, chain));
    }
    std::size_t above = 0;
    long worst_steps = -1000;
    for (std::size_t s = 1; s <= scenarios.size(); ++s)
    {
        const long steps = static_cast<long>(star[{s, 2}]) - static_cast<long>(star[{s, 1}]);
        worst_steps = std::max(worst_steps, steps);
        if (steps > 1)
            ++above;
    }
    const bool strict = std::none_of(problems.begin(), problems.end(),
                                     [](const std::string& p) { return p.find("not strictly") != std::string::npos; });
    std::string detail;
    for (const auto& p : problems)
        detail += p + "; ";
    detail += fmt::format("tau*_2 more than one step above tau*_1 in {}/{} scenarios (largest gap {} steps)", above,
                          scenarios.size(), worst_steps);
    return {strict && above == 0, detail};
}

Outcome cost_scaling()
{
    const auto config = servo_valve_config();
    std::string detail;
    bool pass = true;
    for (const auto mode : {ShockMode::poisson, ShockMode::facilitation})
    {
        const auto system = config.system.with_mode(mode);
        const auto base = optimize_inspection(system, config.ages, config.costs, config.tau, config.sim);
        const CostModel scaled{7 * config.costs.inspection, 7 * config.costs.replacement, 7 * config.costs.downtime_rate};
        const auto other = optimize_inspection(system, config.ages, scaled, config.tau, config.sim);
        pass = pass && base.star_index == other.star_index;
        detail += fmt::format("model {}: index {} vs {}; ", model_number(mode), base.star_index, other.star_index);
    }
    return {pass, detail};
}

Outcome downtime_check()
{
    ReliabilityCurve curve;
    for (int k = 1; k <= 1000; ++k)
    {
        const double t = 2.0 * k / 1000.0;
        curve.points.push_back({t, std::exp(-t), 0.0});
    }
    const double value = expected_downtime(curve, 2.0);
    const double exact = 1.0 + std::exp(-2.0);
    return {std::abs(value - exact) < 1e-4, fmt::format("E[rho] = {:.8f}, exact {:.8f}", value, exact)};
}

Outcome mle_recovery()
{
    RandomStream rng(11, 0);
    std::gamma_distribution<double> draw(0.5, 1.0 / 1.2); // shape alpha*dt with dt = 1, scale 1/beta
    std::vector<IncrementObservation> data(500);
    for (auto& obs : data)
        obs = {1.0, draw(rng)};
    const auto fit = fit_gamma_process(data);
    const double ea = std::abs(fit.alpha / 0.5 - 1.0), eb = std::abs(fit.beta / 1.2 - 1.0);
    const auto g = gamma_log_likelihood(data, fit.alpha, fit.beta);
    const double grad = std::hypot(g.d_alpha, g.d_beta);
    return {ea < 0.1 && eb < 0.1 && grad < 1e-6,
            fmt::format("alpha {:.4f} ({:.1f}%), beta {:.4f} ({:.1f}%), |gradient| {:.2g}", fit.alpha, 100 * ea,
                        fit.beta, 100 * eb, grad)};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome sweep_determinism()
{
    const auto root = std::filesystem::temp_directory_path() / fmt::format("failsim_acceptance_{}", ::getpid());
    std::filesystem::remove_all(root);
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "4"})
    {
        const auto out = root / fmt::format("threads{}", threads);
        std::ostringstream log, err;
        const int status = cli::run({"sweep", "--config", (data_dir / "servo_valve.cfg").string(), "--scenarios",
                                     (data_dir / "age_scenarios.csv").string(), "--diagnostics", "--threads",
                                     threads, "--out", out.string()},
                                    log, err);
        if (status != 0)
            return {false, fmt::format("sweep exited {}: {}", status, err.str())};
        outputs.push_back(slurp(out / "sweep.csv") + slurp(out / "sweep_diagnostics.csv"));
    }
    std::filesystem::remove_all(root);
    const bool same = outputs[0] == outputs[1] && !outputs[0].empty();
    return {same, fmt::format("sweep.csv + sweep_diagnostics.csv with 1 and 4 threads: {} ({} bytes)",
                              same ? "byte-identical" : "differ", outputs[0].size())};
}

std::vector<Criterion> criteria()
{
    return {
        {1, "count pmf sums to 1 over m <= 500", 1.0, pmf_normalization},
        {2, "Poisson limit of the count pmf", 1.0, poisson_limit},
        {3, "event-driven simulator matches count pmf", 30.0, counting_process},
        {4, "closed form vs Monte Carlo at gamma = 0", 120.0, closed_vs_monte_carlo},
        {5, "model 1 reliability >= model 2", 120.0, [] { return model_ordering(false); }},
        {6, "reliability decreasing in gamma", 0.0, [] { return gamma_sensitivity(false); }},
        {7, "four dependence cases ordered", 0.0, [] { return four_cases(false); }},
        {8, "optimal interval orderings over age scenarios", 600.0, age_scenario_orderings},
        {9, "argmin invariant to cost scaling", 0.0, cost_scaling},
        {10, "expected downtime on R(t) = exp(-t)", 0.0, downtime_check},
        {11, "gamma-process MLE recovery", 0.0, mle_recovery},
        {12, "sweep output independent of thread count", 0.0, sweep_determinism},
    };
}

/// The default estimator does not normalise its count weights; for 5-7 also
/// report what the opt-in renormalised estimator gives. Informational only.
void print_renormalized_note(int id)
{
    Outcome o;
    if (id == 5)
        o = model_ordering(true);
    else if (id == 6)
        o = gamma_sensitivity(true);
    else if (id == 7)
        o = four_cases(true);
    else
        return;
    std::printf("  note %d with --renormalize-pmf (not the criterion): %s\n", id, o.detail.c_str());
}

} // namespace

int main(int argc, char** argv)
{
    int only = 0;
    bool notes = true;
    for (int i = 1; i < argc; ++i)
    {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc)
            only = std::stoi(argv[++i]);
        else if (arg == "--no-notes")
            notes = false;
        else
        {
            std::fprintf(stderr, "usage: %s [--only N] [--no-notes]\n", argv[0]);
            return 2;
        }
    }

    int failed = 0, ran = 0;
    for (const auto& c : criteria())
    {
        if (only && c.id != only)
            continue;
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try
        {
            outcome = c.run();
        }
        catch (const std::exception& e)
        {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.time_limit_s <= 0.0 || elapsed < c.time_limit_s;
        const bool pass = outcome.pass && in_time;
        std::string timing = fmt::format("{:.1f} s", elapsed);
        if (c.time_limit_s > 0.0)
            timing += fmt::format(" of {:.0f} s{}", c.time_limit_s, in_time ? "" : " EXCEEDED");
        std::printf("%s criterion %d: %s -- %s [%s]\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    outcome.detail.c_str(), timing.c_str());
        std::fflush(stdout);
        if (notes)
            print_renormalized_note(c.id);
        failed += pass ? 0 : 1;
    }
    if (ran == 0)
    {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    std::printf("%d of %d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
