#include <gtest/gtest.h>

#include "erps/error.hpp"
#include "erps/examples.hpp"
#include "erps/quasi.hpp"
#include "support.hpp"

namespace erps {
namespace {

using testing::from_picture;
using testing::max_diff;

const double kRoot3 = std::sqrt(3.0);

// (1/d) tr(A_β U A_α U†), straight from the operator basis.
std::vector<double> transition_oracle(const OperatorBasis& basis, const ComplexMatrix& u) {
    const std::size_t n = basis.num_points();
    std::vector<double> out(n * n);
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t a = 0; a < n; ++a)
            out[b * n + a] = (basis.a(b) * u * basis.a(a) * u.adjoint()).trace().real() / basis.dim();
    return out;
}

TEST(MachZehnder, WignerFunction) {
    const auto spec = examples::mach_zehnder();
    const OperatorBasis basis(spec.field);
    const auto q = wigner_of_state(basis, spec.state);
    const auto expected = from_picture({{3 - kRoot3, 1 + kRoot3}, {3 + kRoot3, 1 - kRoot3}}, 1.0 / 8.0);
    EXPECT_LT(max_diff(q.values, expected), 1e-14);
    // The negative value sits at q = 1, p = 0.
    EXPECT_LT(q.values[basis.space().index({FieldElement{1}, FieldElement{0}})], 0.0);
}

TEST(MachZehnder, TransitionQuasiprobabilities) {
    const auto spec = examples::mach_zehnder();
    const OperatorBasis basis(spec.field);
    const auto q = quasi_of_channel(basis, spec.channels.front());
    const std::vector<double> expected = testing::flatten({{3, kRoot3, 1, -kRoot3},
                                                           {-kRoot3, 3, kRoot3, 1},
                                                           {1, -kRoot3, 3, kRoot3},
                                                           {kRoot3, 1, -kRoot3, 3}},
                                                          0.25);
    EXPECT_LT(max_diff(q.values, expected), 1e-14);
    EXPECT_LT(max_diff(q.values, transition_oracle(basis, examples::mach_zehnder_unitary())), 1e-14);
}

TEST(MachZehnder, DirectTransmissionIsThreeQuarters) {
    // A beamsplitter that keeps the path with probability 3/4 must keep every
    // phase point with quasiprobability 3/4; a 1/4 diagonal would contradict it.
    const auto spec = examples::mach_zehnder();
    const OperatorBasis basis(spec.field);
    const auto q = quasi_of_channel(basis, spec.channels.front());
    for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(q.at(a, a), 0.75, 1e-14);
    const auto& u = examples::mach_zehnder_unitary();
    EXPECT_NEAR(std::norm(u(0, 0)), 0.75, 1e-14);
    const std::vector<double> swapped = testing::flatten({{1, kRoot3, 3, -kRoot3},
                                                          {-kRoot3, 1, kRoot3, 3},
                                                          {3, -kRoot3, 1, kRoot3},
                                                          {kRoot3, 3, -kRoot3, 1}},
                                                         0.25);
    EXPECT_GT(max_diff(q.values, swapped), 0.4);
}

TEST(MachZehnder, MeasurementFunctionAndBorn) {
    const auto spec = examples::mach_zehnder();
    const OperatorBasis basis(spec.field);
    const auto e = quasi_of_measurement(basis, spec.effect);
    EXPECT_LT(max_diff(e.values, from_picture({{1, 0}, {1, 0}})), 1e-14);
    EXPECT_NEAR(e.trace_effect, 1.0, 1e-14);
    const std::vector<ChannelQuasi> chain{quasi_of_channel(basis, spec.channels.front())};
    const auto born = born_quasi(e, chain, wigner_of_state(basis, spec.state));
    EXPECT_NEAR(born.probability, 0.25, 1e-14);
    EXPECT_NEAR(born_hilbert(spec.state, spec.channels, spec.effect), 0.25, 1e-14);
}

TEST(Wigner, QutritGroundState) {
    const OperatorBasis basis(FiniteField::create(3, 1));
    ComplexMatrix w = ComplexMatrix::Zero(3, 3);
    w(0, 0) = 1.0;
    const auto q = wigner_of_state(basis, w);
    // |0⟩ is the q = 0 vertical line state: 1/3 on that line, 0 elsewhere.
    for (std::size_t a = 0; a < 9; ++a) EXPECT_NEAR(q.values[a], basis.space().point(a).q.index == 0 ? 1.0 / 3.0 : 0.0, 1e-14);
}

class QuasiRoundTrip : public ::testing::TestWithParam<std::pair<std::uint32_t, std::uint32_t>> {};

TEST_P(QuasiRoundTrip, StatesChannelsEffects) {
    const OperatorBasis basis(FiniteField::create(GetParam().first, GetParam().second));
    const auto d = basis.dim();
    RandomSource rng(100 + d);
    for (int k = 0; k < 5; ++k) {
        const auto w = rng.mixed_state(d);
        const auto q = wigner_of_state(basis, w);
        double total = 0.0;
        for (auto v : q.values) total += v;
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_LT(max_abs_diff(state_from_wigner(basis, q), w), 1e-12);

        const auto e = rng.effect(d);
        const auto qe = quasi_of_measurement(basis, e);
        EXPECT_LT(max_abs_diff(effect_from_quasi(basis, qe), e), 1e-12);
        EXPECT_NEAR(qe.trace_effect, e.trace().real(), 1e-12);

        const auto channel = rng.unital_channel(d);
        const auto qc = quasi_of_channel(basis, channel);
        EXPECT_LT(max_abs_diff(apply_channel_quasi(basis, qc, w), apply_channel(channel, w)), 1e-12);
        EXPECT_LT(max_diff(evolve(qc, q).values, wigner_of_state(basis, apply_channel(channel, w)).values), 1e-12);
        // Columns of a unital channel's transition matrix and its rows both sum to one.
        for (std::size_t a = 0; a < basis.num_points(); ++a) {
            double column = 0.0;
            double row = 0.0;
            for (std::size_t b = 0; b < basis.num_points(); ++b) {
                column += qc.at(b, a);
                row += qc.at(a, b);
            }
            EXPECT_NEAR(column, 1.0, 1e-12);
            EXPECT_NEAR(row, 1.0, 1e-12);
        }
    }
}

TEST_P(QuasiRoundTrip, BornRuleAgreement) {
    const auto field = FiniteField::create(GetParam().first, GetParam().second);
    const OperatorBasis basis(field);
    RandomSource rng(200 + field.order());
    for (std::size_t n = 0; n < 3; ++n) {
        const auto spec = testing::random_spec(rng, field, n);
        std::vector<ChannelQuasi> chain;
        for (const auto& c : spec.channels) chain.push_back(quasi_of_channel(basis, c));
        const auto born = born_quasi(quasi_of_measurement(basis, spec.effect), chain, wigner_of_state(basis, spec.state));
        const double oracle = testing::born_direct(spec.state, spec.channels, spec.effect);
        EXPECT_NEAR(born.raw, oracle, 1e-12);
        EXPECT_NEAR(born_hilbert(spec.state, spec.channels, spec.effect), oracle, 1e-12);
    }
}

TEST_P(QuasiRoundTrip, IdentityAndSymplecticChannels) {
    const OperatorBasis basis(FiniteField::create(GetParam().first, GetParam().second));
    const std::size_t n = basis.num_points();
    const auto identity = quasi_of_channel(basis, unitary_channel(ComplexMatrix::Identity(basis.dim(), basis.dim())));
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t a = 0; a < n; ++a) EXPECT_NEAR(identity.at(b, a), a == b ? 1.0 : 0.0, 1e-12);

    const auto legal = legal_symplectics(basis.field());
    const auto& s = legal[legal.size() - 1];
    const auto perm = point_permutation(basis.space(), s);
    const auto q = quasi_of_channel(basis, unitary_channel(symplectic_unitary(basis, s)));
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t a = 0; a < n; ++a) EXPECT_NEAR(q.at(b, a), perm[a] == b ? 1.0 : 0.0, 1e-12);
}

TEST_P(QuasiRoundTrip, ChoiMatrixOfUnitary) {
    const OperatorBasis basis(FiniteField::create(GetParam().first, GetParam().second));
    const auto d = basis.dim();
    RandomSource rng(300 + d);
    const auto u = rng.unitary(d);
    const auto choi = choi_from_quasi(basis, quasi_of_channel(basis, unitary_channel(u)));
    // Σ_{k,l} |k⟩⟨l| ⊗ U|k⟩⟨l|U†
    ComplexMatrix expected = ComplexMatrix::Zero(d * d, d * d);
    for (std::uint32_t k = 0; k < d; ++k)
        for (std::uint32_t l = 0; l < d; ++l) {
            const ComplexMatrix block = u.col(k) * u.col(l).adjoint();
            expected.block(k * d, l * d, d, d) = block;
        }
    EXPECT_LT(max_abs_diff(choi, expected), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Fields, QuasiRoundTrip,
                         ::testing::Values(std::pair{2U, 1U}, std::pair{3U, 1U}, std::pair{5U, 1U}, std::pair{3U, 2U}),
                         [](const auto& info) {
                             return "p" + std::to_string(info.param.first) + "n" + std::to_string(info.param.second);
                         });

TEST(QuasiCompose, MatchesHilbertComposition) {
    const OperatorBasis basis(FiniteField::create(3, 1));
    RandomSource rng(5);
    const auto first = rng.unital_channel(3);
    const auto second = rng.unital_channel(3);
    const auto composed = compose(quasi_of_channel(basis, first), quasi_of_channel(basis, second));
    EXPECT_LT(max_diff(composed.values, quasi_of_channel(basis, compose(first, second)).values), 1e-12);
}

TEST(QuasiErrors, RejectsInvalidInputs) {
    const OperatorBasis basis(FiniteField::create(2, 1));
    const auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return std::string("none");
    };
    const double g = 0.3;
    Channel damping{{(ComplexMatrix(2, 2) << 1, 0, 0, std::sqrt(1 - g)).finished(),
                     (ComplexMatrix(2, 2) << 0, std::sqrt(g), 0, 0).finished()}};
    EXPECT_EQ(code_of([&] { quasi_of_channel(basis, damping); }), "NonUnitalChannel");
    EXPECT_EQ(code_of([&] { quasi_of_channel(basis, Channel{{0.5 * ComplexMatrix::Identity(2, 2)}}); }), "InvalidChannel");
    EXPECT_EQ(code_of([&] { wigner_of_state(basis, 2.0 * ComplexMatrix::Identity(2, 2)); }), "InvalidState");
    EXPECT_EQ(code_of([&] { quasi_of_measurement(basis, 2.0 * ComplexMatrix::Identity(2, 2)); }), "InvalidPovmElement");
    EXPECT_EQ(code_of([&] { state_from_wigner(basis, StateQuasi{2, {1.0}}); }), "DimensionMismatch");
}

}  // namespace
}  // namespace erps
