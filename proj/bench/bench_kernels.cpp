// Serial reference vs OpenMP kernels on a fixed gaussian sample.

#include <benchmark/benchmark.h>

#include <vector>

#include "bphi/empirical.hpp"
#include "bphi/kernels.hpp"

namespace {

using namespace bphi;

const SampleSet& data(int d)
{
    static const SampleSet s2 = sample(VectorDistribution::gaussian(Matrix::Identity(2, 2)), 1 << 20, 1);
    static const SampleSet s4 = sample(VectorDistribution::gaussian(Matrix::Identity(4, 4)), 1 << 20, 2);
    return d == 2 ? s2 : s4;
}

template <bool Parallel>
void signed_exp_moments(benchmark::State& state)
{
    const auto& s = data(static_cast<int>(state.range(0)));
    const std::vector<double> lambda(static_cast<std::size_t>(s.dimension()), 0.7);
    for (auto _ : state) {
        auto r = Parallel ? kernels::signed_exp_moments(s.view(), lambda)
                          : kernels::serial::signed_exp_moments(s.view(), lambda);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}

template <bool Parallel>
void octant_counts(benchmark::State& state)
{
    const auto& s = data(static_cast<int>(state.range(0)));
    const std::vector<double> x(static_cast<std::size_t>(s.dimension()), 1.0);
    for (auto _ : state) {
        auto r = Parallel ? kernels::octant_exceedance_counts(s.view(), x)
                          : kernels::serial::octant_exceedance_counts(s.view(), x);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}

template <bool Parallel>
void abs_power_moment(benchmark::State& state)
{
    const auto& s = data(static_cast<int>(state.range(0)));
    const std::vector<double> r(static_cast<std::size_t>(s.dimension()), 4.0);
    for (auto _ : state) {
        double v = Parallel ? kernels::log_mean_abs_power_product(s.view(), r)
                            : kernels::serial::log_mean_abs_power_product(s.view(), r);
        benchmark::DoNotOptimize(v);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}

template <bool Parallel>
void grid_argmax(benchmark::State& state)
{
    const int d = static_cast<int>(state.range(0));
    const Vector y = Vector::LinSpaced(d, 0.5, 1.5);
    auto objective = [&](const Vector& x) { return y.dot(x) - 0.5 * x.squaredNorm(); };
    const Vector lo = Vector::Constant(d, -4.0), hi = Vector::Constant(d, 4.0);
    for (auto _ : state) {
        auto r = Parallel ? kernels::grid_argmax(objective, lo, hi, 65)
                          : kernels::serial::grid_argmax(objective, lo, hi, 65);
        benchmark::DoNotOptimize(r);
    }
}

}  // namespace

BENCHMARK(signed_exp_moments<false>)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(signed_exp_moments<true>)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(octant_counts<false>)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(octant_counts<true>)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(abs_power_moment<false>)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(abs_power_moment<true>)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(grid_argmax<false>)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(grid_argmax<true>)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
