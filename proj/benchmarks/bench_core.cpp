#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "failsim/maintenance.hpp"
#include "failsim/reliability.hpp"
#include "failsim/stochastic.hpp"

using namespace failsim;

namespace
{

SystemSpec servo_valve()
{
    SystemSpec s;
    s.components.push_back({"spool", 5, 40, {0.5, 1.2}, {10, 5}, NormalParams{0.5, 0.1}});
    s.components.push_back({"sleeve", 6, 45, {0.2, 1.6}, {14, 3}, NormalParams{0.55, 0.1}});
    s.shock_model = {2.5e-5, 0.2, 0.001};
    return s;
}

SimConfig config(std::size_t replications, std::size_t points)
{
    SimConfig c;
    c.replications = replications;
    c.t_grid = log_spaced(0.01, 50.0, points);
    c.threads = 1;
    return c;
}

void BM_GammaCdf(benchmark::State& state)
{
    const double shape = static_cast<double>(state.range(0)) / 10.0;
    double x = 0.1;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(gamma_cdf(x, shape, 1.2));
        x = x < 20.0 ? x + 0.37 : 0.1;
    }
}
BENCHMARK(BM_GammaCdf)->Arg(1)->Arg(25)->Arg(500);

void BM_CountPmf(benchmark::State& state)
{
    int m = 0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(count_pmf(m, 2.5, 0.2));
        m = (m + 1) % 100;
    }
}
BENCHMARK(BM_CountPmf);

void BM_CountDistributionTable(benchmark::State& state)
{
    const CountDistribution counts(0.2, 100);
    int m = 0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(counts.pmf(m, 2.5));
        m = (m + 1) % 100;
    }
}
BENCHMARK(BM_CountDistributionTable);

void BM_DamageSumIntegral(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    const NormalParams damage{0.5, 0.1};
    const auto integrand = [](double y) { return gamma_cdf(5.0 - y, 0.5 * 6.0, 1.2); };
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_damage_sum(m, damage, integrand, 5.0));
}
BENCHMARK(BM_DamageSumIntegral)->Arg(1)->Arg(4)->Arg(9);

void BM_SampleGammaPath(benchmark::State& state)
{
    const auto steps = static_cast<std::size_t>(state.range(0));
    RandomStream rng(1, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_gamma_path({0.5, 1.2}, 50.0, steps, rng));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleGammaPath)->Arg(250)->Arg(1000);

void BM_Replication(benchmark::State& state)
{
    const ReplicationEngine engine(servo_valve(), {{0.0, 0.0}}, config(1, static_cast<std::size_t>(state.range(0))));
    std::uint64_t index = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(engine.run(index++));
}
BENCHMARK(BM_Replication)->Arg(20)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_EngineSetup(benchmark::State& state)
{
    const auto c = config(1, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(ReplicationEngine(servo_valve(), {{0.0, 0.0}}, c));
}
BENCHMARK(BM_EngineSetup)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ReliabilityCurve(benchmark::State& state)
{
    const auto c = config(static_cast<std::size_t>(state.range(0)), 100);
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_reliability_curve(servo_valve(), {{0.0, 0.0}}, c));
}
BENCHMARK(BM_ReliabilityCurve)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_OptimizeInspection(benchmark::State& state)
{
    const auto c = config(1000, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(optimize_inspection(servo_valve(), {{0.0, 0.0}}, {5, 20, 100}, TauGrid{}, c));
}
BENCHMARK(BM_OptimizeInspection)->Unit(benchmark::kMillisecond);

void BM_FitGammaProcess(benchmark::State& state)
{
    RandomStream rng(5, 0);
    std::gamma_distribution<double> draw(0.5, 1.0 / 1.2);
    std::vector<IncrementObservation> data(static_cast<std::size_t>(state.range(0)));
    for (auto& obs : data)
        obs = {1.0, draw(rng)};
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_gamma_process(data));
}
BENCHMARK(BM_FitGammaProcess)->Arg(500)->Arg(10000);

} // namespace

BENCHMARK_MAIN();
