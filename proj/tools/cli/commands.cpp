#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "config.hpp"
#include "experiments.hpp"
#include "failsim/csv.hpp"
#include "failsim/error.hpp"
#include "failsim/maintenance.hpp"
#include "failsim/reliability.hpp"
#include "manifest.hpp"

#ifndef FAILSIM_VERSION
#define FAILSIM_VERSION "unknown"
#endif

namespace failsim::cli
{
namespace
{

/// Unreadable or malformed data file named on the command line.
class InputError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct Options
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replications;
    std::string out_dir = "failsim_out";
    std::string model = "both";
    bool renormalize = false;
    std::size_t threads = 0;

    std::string param;
    std::vector<double> values;
    std::string scenarios;
    std::string data;
    bool diagnostics = false;
};

/// What a subcommand needs while it runs.
struct Context
{
    const Options& options;
    OutputDir& dir;
    RunManifest& manifest;
    std::ostream& out;
    std::ostream& err;
};

std::vector<ShockMode> selected_modes(const std::string& model)
{
    if (model == "1")
        return {ShockMode::poisson};
    if (model == "2")
        return {ShockMode::facilitation};
    return {ShockMode::poisson, ShockMode::facilitation};
}

ExperimentConfig prepare_config(const Options& o)
{
    if (o.config_path.empty())
        throw InputError("--config is required for this subcommand");
    ExperimentConfig config = load_config(o.config_path);
    if (o.seed)
        config.sim.seed = *o.seed;
    if (o.replications)
        config.sim.replications = *o.replications;
    config.sim.renormalize_pmf = o.renormalize;
    config.sim.threads = o.threads;
    validate_config(config); // overrides may break the sim invariants
    return config;
}

template <class Writer>
void write_file(Context& ctx, const std::string& name, Writer&& writer)
{
    auto file = ctx.dir.open(name);
    writer(file);
    file.close();
    if (!file)
        throw Error(fmt::format("failed while writing {}", name));
    ctx.manifest.outputs.push_back(name);
    ctx.out << "wrote " << (ctx.dir.root() / name).string() << '\n';
}

void note_truncation(Context& ctx, const std::string& label, const ReliabilityCurve& curve, double tolerance)
{
    if (curve.max_residual_mass > tolerance)
        fmt::print(ctx.err, "warning: {}: count-tail mass {} beyond max_shocks exceeds {}\n", label,
                   curve.max_residual_mass, tolerance);
}

std::string model_file(const std::string& stem, ShockMode mode)
{
    return fmt::format("{}_model{}.csv", stem, model_number(mode));
}

int cmd_reliability(Context& ctx, const ExperimentConfig& config)
{
    for (const auto mode : selected_modes(ctx.options.model))
    {
        const auto curve = estimate_reliability_curve(config.system.with_mode(mode), config.ages, config.sim);
        note_truncation(ctx, model_file("reliability", mode), curve, config.sim.truncation_tolerance);
        write_file(ctx, model_file("reliability", mode), [&](std::ostream& f) { write_curve_csv(f, curve); });
    }
    return exit_ok;
}

int cmd_sensitivity(Context& ctx, const ExperimentConfig& config)
{
    for (const double value : ctx.options.values)
    {
        const auto system = with_shock_parameter(config.system, ctx.options.param, value);
        if (const auto violations = check_system(system); !violations.empty())
            throw ValidationFailure(violations);
        const auto curve = estimate_reliability_curve(system, config.ages, config.sim);
        const auto name = fmt::format("sensitivity_{}_{}.csv", ctx.options.param, format_double(value));
        note_truncation(ctx, name, curve, config.sim.truncation_tolerance);
        write_file(ctx, name, [&](std::ostream& f) { write_curve_csv(f, curve); });
    }
    return exit_ok;
}

int cmd_cases(Context& ctx, const ExperimentConfig& config)
{
    for (int which = 1; which <= 4; ++which)
    {
        const auto curve = estimate_reliability_curve(dependence_case(config.system, which), config.ages, config.sim);
        write_file(ctx, fmt::format("case{}.csv", which), [&](std::ostream& f) { write_curve_csv(f, curve); });
    }
    return exit_ok;
}

int cmd_optimize(Context& ctx, const ExperimentConfig& config)
{
    for (const auto mode : selected_modes(ctx.options.model))
    {
        const auto result =
            optimize_inspection(config.system.with_mode(mode), config.ages, config.costs, config.tau, config.sim);
        fmt::print(ctx.out, "model {}: tau* = {}  CR* = {}{}\n", model_number(mode), format_double(result.tau_star),
                   format_double(result.cr_star), result.failed_at_inspection ? "  (failed at inspection)" : "");
        write_file(ctx, model_file("optimize", mode), [&](std::ostream& f) { write_maintenance_result(f, result); });
    }
    return exit_ok;
}

int cmd_sweep(Context& ctx, const ExperimentConfig& config)
{
    std::vector<InitialAges> scenarios;
    {
        std::ifstream in(ctx.options.scenarios);
        if (!in)
            throw InputError("cannot open scenarios file " + ctx.options.scenarios);
        try
        {
            scenarios = read_scenarios_csv(in);
        }
        catch (const Error& e)
        {
            throw InputError(fmt::format("{}: {}", ctx.options.scenarios, e.what()));
        }
    }
    const auto rows = scenario_sweep(config.system, scenarios, config.costs, config.tau, config.sim,
                                     selected_modes(ctx.options.model));
    std::size_t failed = 0;
    for (const auto& row : rows)
        if (!row.result)
        {
            ++failed;
            fmt::print(ctx.err, "scenario {} model {}: {}\n", row.scenario, model_number(row.mode), row.error);
        }
    if (failed == rows.size())
        throw Error("every scenario failed");

    const auto n = config.system.components.size();
    write_file(ctx, "sweep.csv", [&](std::ostream& f) { write_sweep_csv(f, rows, n); });
    if (ctx.options.diagnostics)
        write_file(ctx, "sweep_diagnostics.csv", [&](std::ostream& f) { write_sweep_diagnostics_csv(f, rows); });
    return exit_ok;
}

int cmd_fit(Context& ctx)
{
    std::vector<IncrementObservation> data;
    {
        std::ifstream in(ctx.options.data);
        if (!in)
            throw InputError("cannot open data file " + ctx.options.data);
        try
        {
            data = read_increments_csv(in);
        }
        catch (const Error& e)
        {
            throw InputError(fmt::format("{}: {}", ctx.options.data, e.what()));
        }
    }
    const auto fit = fit_gamma_process(data);
    fmt::print(ctx.out, "alpha = {}  beta = {}  ({} increments, {} zero increments dropped)\n",
               format_double(fit.alpha), format_double(fit.beta), fit.used, fit.dropped_zeros);
    write_file(ctx, "fit.csv", [&](std::ostream& f) {
        f << "alpha,beta,log_likelihood,gradient_norm,iterations,used,dropped_zeros\n"
          << format_double(fit.alpha) << ',' << format_double(fit.beta) << ',' << format_double(fit.log_likelihood)
          << ',' << format_double(fit.gradient_norm) << ',' << fit.iterations << ',' << fit.used << ','
          << fit.dropped_zeros << '\n';
    });
    return exit_ok;
}

struct Check
{
    std::string name;
    double value;
    double limit;

    bool pass() const { return value <= limit; }
};

int cmd_selftest(Context& ctx, const ExperimentConfig& config)
{
    std::vector<Check> checks;

    double identity = 0.0;
    for (double lambda : {0.1, 1.0, 10.0})
        for (double eta : {0.0, 0.01, 0.2, 1.0})
        {
            double sum = 0.0;
            for (int m = 0; m <= 500; ++m)
                sum += count_pmf(m, lambda, eta);
            identity = std::max(identity, std::abs(sum + count_tail_mass(500, lambda, eta) - 1.0));
        }
    checks.push_back({"pmf_plus_tail_is_one", identity, 1e-12});

    double poisson_gap = 0.0;
    for (int m = 0; m <= 60; ++m)
    {
        const double poisson = std::exp(m * std::log(3.0) - 3.0 - std::lgamma(m + 1.0));
        poisson_gap = std::max(poisson_gap, std::abs(count_pmf(m, 3.0, 1e-6) - poisson));
    }
    checks.push_back({"poisson_limit", poisson_gap, 1e-4});

    // gamma = 0 makes counts path-independent, so the closed form is exact
    auto system = config.system;
    system.mode = ShockMode::facilitation;
    system.shock_model.gamma = 0.0;
    SimConfig sim = config.sim;
    sim.t_grid = log_spaced(config.grid.t_min, config.grid.t_max, 20);
    const auto mc = estimate_reliability_curve(system, config.ages, sim);
    const auto closed = closed_form_curve(system, config.ages, sim.t_grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < mc.points.size(); ++k)
    {
        const double allowed = std::max(3.0 * mc.points[k].standard_error, 1e-3);
        worst = std::max(worst, std::abs(mc.points[k].reliability - closed.points[k].reliability) / allowed);
    }
    checks.push_back({"closed_form_vs_monte_carlo_gamma0", worst, 1.0});

    bool ok = true;
    for (const auto& c : checks)
    {
        fmt::print(ctx.out, "{} {}: {} (limit {})\n", c.pass() ? "PASS" : "FAIL", c.name, c.value, c.limit);
        ok = ok && c.pass();
    }
    write_file(ctx, "selftest.csv", [&](std::ostream& f) {
        f << "check,value,limit,status\n";
        for (const auto& c : checks)
            f << c.name << ',' << format_double(c.value) << ',' << format_double(c.limit) << ','
              << (c.pass() ? "pass" : "fail") << '\n';
    });
    if (!ok)
    {
        fmt::print(ctx.err, "selftest failed\n");
        return exit_numerical;
    }
    return exit_ok;
}

void add_common_options(CLI::App& app, Options& o)
{
    app.add_option("--config", o.config_path, "experiment config (YAML)");
    app.add_option("--seed", o.seed, "master seed, overrides sim.seed");
    app.add_option("--replications", o.replications, "Monte Carlo replications, overrides sim.replications");
    app.add_option("--out", o.out_dir, "output directory")->capture_default_str();
    app.add_option("--model", o.model, "1 (Poisson shocks), 2 (dependent), or both")
        ->check(CLI::IsMember({"1", "2", "both"}))
        ->capture_default_str();
    app.add_flag("--renormalize-pmf", o.renormalize, "divide count weights by their truncated sum");
    app.add_option("--threads", o.threads, "worker threads (0: FAILSIM_THREADS or all cores)");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Reliability and inspection planning for multi-component systems with dependent shocks and wear",
                 "failsim"};
    app.set_version_flag("--version", FAILSIM_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    add_common_options(app, o);

    app.add_subcommand("reliability", "reliability curves for model 1 and/or model 2");
    auto* sensitivity = app.add_subcommand("sensitivity", "model 2 curves over a range of gamma or eta");
    sensitivity->add_option("--param", o.param, "gamma or eta")->required()->check(CLI::IsMember({"gamma", "eta"}));
    sensitivity->add_option("--values", o.values, "comma-separated values")->required()->delimiter(',');
    app.add_subcommand("cases", "the four dependence cases");
    app.add_subcommand("optimize", "cost-rate optimal inspection interval for the configured ages");
    auto* sweep = app.add_subcommand("sweep", "optimal intervals for every age scenario in a CSV");
    sweep->add_option("--scenarios", o.scenarios, "CSV with header scenario,u_1,...,u_n")->required();
    sweep->add_flag("--diagnostics", o.diagnostics, "also write per-tau rows");
    auto* fit = app.add_subcommand("fit", "gamma-process MLE from increment data");
    fit->add_option("--data", o.data, "CSV with header dt,dx")->required();
    app.add_subcommand("selftest", "built-in oracle and normalisation checks");

    std::vector<const char*> argv{"failsim"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid;
    }

    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try
    {
        std::optional<ExperimentConfig> config;
        if (name != "fit")
            config = prepare_config(o);

        RunManifest manifest;
        manifest.tool_version = FAILSIM_VERSION;
        manifest.subcommand = name;
        manifest.arguments = args;
        manifest.config_digest = config ? config->digest : "none";
        manifest.seed = config ? config->sim.seed : 0;
        manifest.replications = config ? config->sim.replications : 0;
        manifest.timestamp = utc_timestamp();

        OutputDir dir(o.out_dir);
        Context ctx{o, dir, manifest, out, err};
        int status = exit_ok;
        if (name == "reliability")
            status = cmd_reliability(ctx, *config);
        else if (name == "sensitivity")
            status = cmd_sensitivity(ctx, *config);
        else if (name == "cases")
            status = cmd_cases(ctx, *config);
        else if (name == "optimize")
            status = cmd_optimize(ctx, *config);
        else if (name == "sweep")
            status = cmd_sweep(ctx, *config);
        else if (name == "fit")
            status = cmd_fit(ctx);
        else
            status = cmd_selftest(ctx, *config);
        if (status != exit_ok)
            return status; // dir cleans up

        auto file = dir.open("manifest.txt");
        manifest.write(file);
        file.close();
        if (!file)
            throw Error("failed while writing manifest.txt");
        dir.commit();
        return exit_ok;
    }
    catch (const ConfigError& e)
    {
        fmt::print(err, "error: {}\n", e.what());
        return exit_invalid;
    }
    catch (const ValidationFailure& e)
    {
        fmt::print(err, "error: {}\n", e.what());
        return exit_invalid;
    }
    catch (const InputError& e)
    {
        fmt::print(err, "error: {}\n", e.what());
        return exit_invalid;
    }
    catch (const std::exception& e)
    {
        fmt::print(err, "numerical failure: {}\n", e.what());
        return exit_numerical;
    }
}

} // namespace failsim::cli
