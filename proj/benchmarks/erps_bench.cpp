#include <benchmark/benchmark.h>

#include "erps/constraints.hpp"
#include "erps/engine.hpp"
#include "erps/random.hpp"

namespace {

using namespace erps;

FiniteField field_for(std::int64_t d) {
    switch (d) {
        case 9: return FiniteField::create(3, 2);
        case 25: return FiniteField::create(5, 2);
        default: return FiniteField::create(static_cast<std::uint32_t>(d), 1);
    }
}

ExperimentSpec random_spec(const FiniteField& field, std::size_t n_channels) {
    RandomSource rng(field.order());
    const auto d = field.order();
    ExperimentSpec spec{field, rng.mixed_state(d), {}, rng.effect(d)};
    for (std::size_t k = 0; k < n_channels; ++k) spec.channels.push_back(rng.unital_channel(d));
    return spec;
}

// args: d, n_channels
void BM_Predict(benchmark::State& state) {
    const PreparedExperiment experiment(random_spec(field_for(state.range(0)), state.range(1)), FrameworkMode::FullGroup);
    EngineOptions options;
    for (auto _ : state) benchmark::DoNotOptimize(experiment.predict(options).raw);
    state.counters["frameworks"] = static_cast<double>(
        framework_count(experiment.space().num_striations(), experiment.set().matrices.size(), state.range(1),
                        FrameworkFilter::Coherent));
}
BENCHMARK(BM_Predict)->Args({2, 1})->Args({3, 2})->Args({5, 2})->Args({9, 1})->Args({9, 2})->Unit(benchmark::kMillisecond);

void BM_PredictAll(benchmark::State& state) {
    const PreparedExperiment experiment(random_spec(field_for(state.range(0)), state.range(1)), FrameworkMode::FullGroup);
    EngineOptions options;
    options.filter = FrameworkFilter::All;
    for (auto _ : state) benchmark::DoNotOptimize(experiment.predict(options).raw);
}
BENCHMARK(BM_PredictAll)->Args({3, 2})->Args({5, 2})->Args({9, 1})->Unit(benchmark::kMillisecond);

void BM_Prepare(benchmark::State& state) {
    const auto spec = random_spec(field_for(state.range(0)), 1);
    for (auto _ : state) {
        PreparedExperiment experiment(spec, FrameworkMode::FullGroup);
        benchmark::DoNotOptimize(experiment.n_channels());
    }
}
BENCHMARK(BM_Prepare)->Arg(3)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_Wigner(benchmark::State& state) {
    const auto field = field_for(state.range(0));
    const auto basis = operator_basis(field);
    RandomSource rng(1);
    const auto w = rng.mixed_state(field.order());
    for (auto _ : state) benchmark::DoNotOptimize(wigner_of_state(*basis, w).values.data());
}
BENCHMARK(BM_Wigner)->Arg(3)->Arg(5)->Arg(9)->Arg(25);

void BM_OperatorBasis(benchmark::State& state) {
    const auto field = field_for(state.range(0));
    for (auto _ : state) {
        OperatorBasis basis(field);
        benchmark::DoNotOptimize(basis.a(0).data());
    }
}
BENCHMARK(BM_OperatorBasis)->Arg(3)->Arg(9)->Arg(25)->Unit(benchmark::kMicrosecond);

// Found sets are cached per process, so only the first iteration searches.
void BM_MrsSearch(benchmark::State& state) {
    for (auto _ : state) {
        MrsOptions options;
        options.node_budget = 10'000'000;
        const auto field = FiniteField::create(static_cast<std::uint32_t>(state.range(0)), 1);
        benchmark::DoNotOptimize(minimal_reconstructing_set(field, options).nodes);
    }
}
BENCHMARK(BM_MrsSearch)->Arg(5)->Arg(7)->Arg(11)->Iterations(1)->Unit(benchmark::kMillisecond);

void BM_UnitarityCheck(benchmark::State& state) {
    const auto field = field_for(state.range(0));
    const auto basis = operator_basis(field);
    RandomSource rng(2);
    const auto q = quasi_of_channel(*basis, unitary_channel(rng.unitary(field.order())));
    const auto family = restrict_channel_all(basis->space(), q, legal_symplectics(field));
    for (auto _ : state) benchmark::DoNotOptimize(check_unitary_channel(*basis, family).max_residual);
}
BENCHMARK(BM_UnitarityCheck)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
