#include <gtest/gtest.h>

#include "erps/error.hpp"
#include "erps/examples.hpp"
#include "support.hpp"

namespace erps {
namespace {

using testing::from_picture;
using testing::max_diff;

const double kRoot3 = std::sqrt(3.0);

constexpr std::size_t kX = 0;
constexpr std::size_t kY = 1;
constexpr std::size_t kZ = 2;
constexpr std::size_t kI = 0;
constexpr std::size_t kR = 1;
constexpr std::size_t kL = 2;

TEST(FrameworkCounts, ClosedForms) {
    EXPECT_EQ(framework_count(3, 3, 1, FrameworkFilter::All), 27U);
    EXPECT_EQ(framework_count(3, 3, 1, FrameworkFilter::Coherent), 9U);
    EXPECT_EQ(framework_count(4, 24, 1, FrameworkFilter::Coherent), 96U);
    EXPECT_EQ(framework_count(4, 24, 0, FrameworkFilter::All), 16U);
    EXPECT_EQ(framework_count(10, 720, 2, FrameworkFilter::Coherent), 10U * 720U * 720U);
}

TEST(FrameworkCounts, EnumerationMatches) {
    const PhaseSpace space(FiniteField::create(3, 1));
    const auto set = symplectic_set(space.field(), FrameworkMode::FullGroup);
    for (auto filter : {FrameworkFilter::Coherent, FrameworkFilter::All}) {
        const auto frameworks = enumerate_frameworks(space, set, 1, filter);
        EXPECT_EQ(frameworks.size(), framework_count(4, 24, 1, filter));
        for (const auto& fw : frameworks) {
            if (filter == FrameworkFilter::Coherent) EXPECT_EQ(fw.meas, coherent_measurement(space, set, fw.prep, fw.channels));
        }
    }
}

TEST(CoherentMeasurement, FollowsStriationImages) {
    const PhaseSpace space(FiniteField::create(2, 1));
    const auto set = symplectic_set(space.field(), FrameworkMode::FullGroup);
    for (std::size_t b = 0; b < 3; ++b) {
        const std::vector<std::size_t> identity{kI};
        EXPECT_EQ(coherent_measurement(space, set, b, identity), b);
        for (std::size_t s = 0; s < 3; ++s) {
            const std::vector<std::size_t> chain{s};
            EXPECT_EQ(coherent_measurement(space, set, b, chain),
                      apply_striation_image(space, set.matrices[s], b).striation);
        }
    }
    EXPECT_EQ(coherent_measurement(space, set, kY, std::vector<std::size_t>{kL}), kZ);
    EXPECT_EQ(coherent_measurement(space, set, kZ, std::vector<std::size_t>{kR}), kY);
}

struct MachZehnder : ::testing::Test {
    PreparedExperiment experiment{examples::mach_zehnder(), FrameworkMode::FullGroup};
};

TEST_F(MachZehnder, PremeasurementStates) {
    const auto grid = [&](std::size_t prep, std::size_t s) {
        return experiment.premeasurement(prep, std::vector<std::size_t>{s});
    };
    EXPECT_LT(max_diff(grid(kY, kI), from_picture({{4 - kRoot3, 4 + kRoot3}, {4 + kRoot3, 4 - kRoot3}}, 1.0 / 16)),
              1e-14);
    EXPECT_LT(max_diff(grid(kY, kL), from_picture({{1, 7}, {1, 7}}, 1.0 / 16)), 1e-14);
    EXPECT_LT(max_diff(grid(kZ, kI), from_picture({{5, 3}, {5, 3}}, 1.0 / 16)), 1e-14);
    EXPECT_LT(max_diff(grid(kZ, kR), from_picture({{4 - kRoot3, 4 + kRoot3}, {4 + kRoot3, 4 - kRoot3}}, 1.0 / 16)),
              1e-14);
    EXPECT_LT(max_diff(grid(kX, kR), std::vector<double>(4, 0.25)), 1e-14);
}

TEST_F(MachZehnder, ClassicalPredictions) {
    EXPECT_NEAR(experiment.classical_predict({kY, {kL}, kZ}), 1.0 / 8.0, 1e-14);
    EXPECT_NEAR(experiment.classical_predict({kZ, {kI}, kZ}), 5.0 / 8.0, 1e-14);
    EXPECT_NEAR(experiment.classical_predict({kY, {kI}, kZ}), 0.5, 1e-14);
    EXPECT_NEAR(experiment.classical_predict({kZ, {kR}, kZ}), 0.5, 1e-14);
    for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t s = 0; s < 3; ++s)
            for (std::size_t m : {kX, kY}) EXPECT_NEAR(experiment.classical_predict({b, {s}, m}), 0.5, 1e-14);
    EXPECT_NEAR(classical_predict({kY, {kL}, kZ}, examples::mach_zehnder()), 1.0 / 8.0, 1e-14);
}

TEST_F(MachZehnder, PredictionAndContributors) {
    EngineOptions options;
    options.record_frameworks = true;
    const auto report = experiment.predict(options);
    EXPECT_NEAR(report.probability, 0.25, 1e-14);
    EXPECT_NEAR(report.delta_sum, -0.25, 1e-14);
    EXPECT_NEAR(report.offset, 0.5, 1e-14);
    EXPECT_EQ(report.frameworks, 9U);
    EXPECT_EQ(report.nonzero_contributors, 2U);
    ASSERT_EQ(report.table.size(), 9U);
    for (const auto& row : report.table) {
        double expected = 0.0;
        if (row.framework == Framework{kY, {kL}, kZ}) expected = -3.0 / 8.0;
        if (row.framework == Framework{kZ, {kI}, kZ}) expected = 1.0 / 8.0;
        EXPECT_NEAR(row.delta, expected, 1e-14);
        EXPECT_NEAR(row.classical - 0.5, row.delta, 1e-14);
        EXPECT_TRUE(row.coherent);
    }
}

TEST_F(MachZehnder, AllFiltersAgree) {
    EngineOptions options;
    options.filter = FrameworkFilter::All;
    const auto report = experiment.predict(options);
    EXPECT_EQ(report.frameworks, 27U);
    EXPECT_NEAR(report.probability, 0.25, 1e-14);
    EXPECT_LT(report.max_incoherent, 1e-14);
}

TEST(Engine, MaximallyMixedStateGivesOffsetOnly) {
    for (std::uint32_t p : {2U, 3U, 5U}) {
        const auto field = FiniteField::create(p, 1);
        RandomSource rng(p);
        ExperimentSpec spec{field, ComplexMatrix::Identity(p, p) / double(p), {rng.unital_channel(p)}, rng.effect(p)};
        const auto report = quantum_predict(spec);
        EXPECT_NEAR(report.delta_sum, 0.0, 1e-13);
        EXPECT_NEAR(report.raw, spec.effect.trace().real() / p, 1e-13);
    }
}

class RandomExperiments : public ::testing::TestWithParam<std::pair<std::uint32_t, std::uint32_t>> {};

TEST_P(RandomExperiments, BornEquivalenceAndFrameworkFacts) {
    const auto field = FiniteField::create(GetParam().first, GetParam().second);
    RandomSource rng(700 + field.order());
    for (std::size_t n = 0; n < 3; ++n) {
        const auto spec = testing::random_spec(rng, field, n);
        const PreparedExperiment experiment(spec, FrameworkMode::FullGroup);
        EngineOptions options;
        options.record_frameworks = field.order() <= 5 || n < 2;
        const auto report = experiment.predict(options);
        const double oracle = testing::born_direct(spec.state, spec.channels, spec.effect);
        EXPECT_NEAR(report.raw, oracle, 1e-10);
        EXPECT_GE(experiment.min_restricted_raw(), -1e-9);
        for (const auto& row : report.table) {
            EXPECT_GE(row.classical, -1e-12);
            EXPECT_LE(row.classical, 1.0 + 1e-12);
            if (&row - report.table.data() < 40) {
                EXPECT_NEAR(row.delta, experiment.delta_point_level(row.framework), 1e-12);
                EXPECT_NEAR(row.classical, experiment.classical_predict(row.framework), 1e-12);
            }
        }
    }
}

TEST_P(RandomExperiments, CoherentEqualsAll) {
    const auto field = FiniteField::create(GetParam().first, GetParam().second);
    RandomSource rng(800 + field.order());
    const auto spec = testing::random_spec(rng, field, field.order() <= 5 ? 2 : 1);
    const auto check = coherence_equivalence_check(spec, FrameworkMode::FullGroup);
    EXPECT_LT(check.deviation, 1e-10);
    EXPECT_LT(check.max_incoherent, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Fields, RandomExperiments,
                         ::testing::Values(std::pair{2U, 1U}, std::pair{3U, 1U}, std::pair{5U, 1U}, std::pair{3U, 2U}),
                         [](const auto& info) {
                             return "p" + std::to_string(info.param.first) + "n" + std::to_string(info.param.second);
                         });

TEST(Engine, MinimalSetAgreesWithFullGroup) {
    for (std::uint32_t p : {3U, 5U, 7U}) {
        const auto field = FiniteField::create(p, 1);
        RandomSource rng(900 + p);
        const auto spec = testing::random_spec(rng, field, 2);
        EngineOptions full;
        EngineOptions mrs;
        mrs.mode = FrameworkMode::Mrs;
        const auto a = quantum_predict(spec, full);
        const auto b = quantum_predict(spec, mrs);
        EXPECT_NEAR(a.raw, b.raw, 1e-10);
        EXPECT_EQ(b.redundancy, 1U);
        EXPECT_EQ(b.frameworks, framework_count(p + 1, p * p - 1, 2, FrameworkFilter::Coherent));
    }
}

TEST(Engine, ThreadCountDoesNotChangeResults) {
    const auto field = FiniteField::create(5, 1);
    RandomSource rng(31);
    const auto spec = testing::random_spec(rng, field, 2);
    EngineOptions one;
    EngineOptions four;
    four.threads = 4;
    const auto a = quantum_predict(spec, one);
    const auto b = quantum_predict(spec, four);
    EXPECT_EQ(a.raw, b.raw);
    EXPECT_EQ(a.delta_sum, b.delta_sum);
    EXPECT_EQ(a.nonzero_contributors, b.nonzero_contributors);
}

TEST(Engine, Errors) {
    const auto code_of = [](const auto& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return std::string("none");
    };
    RandomSource rng(3);
    const auto spec = testing::random_spec(rng, FiniteField::create(5, 1), 2);
    EngineOptions options;
    options.record_frameworks = true;
    options.record_limit = 100;
    EXPECT_EQ(code_of([&] { quantum_predict(spec, options); }), "ReportTooLarge");
    EngineOptions mrs;
    mrs.mode = FrameworkMode::Mrs;
    const auto nine = testing::random_spec(rng, FiniteField::create(3, 2), 0);
    EXPECT_EQ(code_of([&] { quantum_predict(nine, mrs); }), "MrsUnavailable");
    const PreparedExperiment experiment(spec, FrameworkMode::FullGroup);
    EXPECT_EQ(code_of([&] { experiment.classical_predict({0, {0}, 0}); }), "InvalidFramework");
}

TEST(PairwiseSum, IsAccurate) {
    std::vector<double> values(1 << 20, 0.1);
    EXPECT_NEAR(pairwise_sum(values), 0.1 * values.size(), 1e-8);
    EXPECT_EQ(pairwise_sum({}), 0.0);
}

}  // namespace
}  // namespace erps
