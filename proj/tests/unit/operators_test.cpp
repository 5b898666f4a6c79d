#include <numbers>

#include <gtest/gtest.h>

#include "erps/error.hpp"
#include "erps/operators.hpp"
#include "support.hpp"

namespace erps {
namespace {

using namespace std::complex_literals;

constexpr double kTol = 1e-12;

ComplexMatrix pauli_x() { return (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished(); }
ComplexMatrix pauli_y() { return (ComplexMatrix(2, 2) << 0, -1i, 1i, 0).finished(); }
ComplexMatrix pauli_z() { return (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished(); }

// ½[I + (−1)^p X + (−1)^{q+p} Y + (−1)^q Z]
ComplexMatrix qubit_oracle(int q, int p) {
    const auto sign = [](int k) { return k % 2 == 0 ? 1.0 : -1.0; };
    return 0.5 * (ComplexMatrix::Identity(2, 2) + sign(p) * pauli_x() + sign(q + p) * pauli_y() + sign(q) * pauli_z());
}

// (1/d) Σ_δ ω^{⟨α,δ⟩} ω^{δq δp/2} X^{δq} Z^{δp} for prime d, built from shift and clock matrices.
ComplexMatrix prime_oracle(int d, int q, int p) {
    const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / d);
    const auto w = [&](long k) { return std::pow(omega, static_cast<double>(((k % d) + d) % d)); };
    const long half = (d + 1) / 2;
    ComplexMatrix shift = ComplexMatrix::Zero(d, d);
    ComplexMatrix clock = ComplexMatrix::Zero(d, d);
    for (int m = 0; m < d; ++m) {
        shift((m + 1) % d, m) = 1.0;
        clock(m, m) = w(m);
    }
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (int dq = 0; dq < d; ++dq) {
        for (int dp = 0; dp < d; ++dp) {
            ComplexMatrix disp = ComplexMatrix::Identity(d, d);
            for (int k = 0; k < dq; ++k) disp = shift * disp;
            for (int k = 0; k < dp; ++k) disp = disp * clock;
            out += w(p * dq - q * dp) * w(half * dq * dp) * disp;
        }
    }
    return out / static_cast<double>(d);
}

TEST(PhasePointOperators, QubitMatchesPauliExpansion) {
    const OperatorBasis basis(FiniteField::create(2, 1));
    for (int q = 0; q < 2; ++q)
        for (int p = 0; p < 2; ++p)
            EXPECT_LT(max_abs_diff(basis.a(basis.space().index({FieldElement{std::uint32_t(q)}, FieldElement{std::uint32_t(p)}})),
                                   qubit_oracle(q, p)),
                      kTol);
    const ComplexMatrix a0 = (ComplexMatrix(2, 2) << 1, 0.5 - 0.5i, 0.5 + 0.5i, 0).finished();
    EXPECT_LT(max_abs_diff(basis.a(0), a0), kTol);
}

TEST(PhasePointOperators, QutritOriginIsParity) {
    const OperatorBasis basis(FiniteField::create(3, 1));
    const ComplexMatrix parity = (ComplexMatrix(3, 3) << 1, 0, 0, 0, 0, 1, 0, 1, 0).finished();
    EXPECT_LT(max_abs_diff(basis.a(0), parity), kTol);
}

class PrimeBasis : public ::testing::TestWithParam<std::uint32_t> {};

TEST_P(PrimeBasis, MatchesDisplacementOracle) {
    const int d = static_cast<int>(GetParam());
    const OperatorBasis basis(FiniteField::create(GetParam(), 1));
    for (int q = 0; q < d; ++q)
        for (int p = 0; p < d; ++p) {
            const PhasePoint pt{FieldElement{std::uint32_t(q)}, FieldElement{std::uint32_t(p)}};
            EXPECT_LT(max_abs_diff(basis.a(basis.space().index(pt)), prime_oracle(d, q, p)), 1e-11);
            EXPECT_LT(max_abs_diff(a_from_displacements(basis, pt), basis.a(basis.space().index(pt))), 1e-11);
        }
}

INSTANTIATE_TEST_SUITE_P(Odd, PrimeBasis, ::testing::Values(3U, 5U, 7U));

class BasisProperties : public ::testing::TestWithParam<std::pair<std::uint32_t, std::uint32_t>> {};

TEST_P(BasisProperties, HermitianUnitTraceOrthogonalComplete) {
    const OperatorBasis basis(FiniteField::create(GetParam().first, GetParam().second));
    const std::size_t n = basis.num_points();
    const double d = basis.dim();
    ComplexMatrix total = ComplexMatrix::Zero(basis.dim(), basis.dim());
    for (std::size_t a = 0; a < n; ++a) {
        EXPECT_LT(max_abs_diff(basis.a(a), basis.a(a).adjoint()), kTol);
        EXPECT_NEAR(basis.a(a).trace().real(), 1.0, kTol);
        for (std::size_t b = 0; b < n; ++b) {
            const Complex inner = (basis.a(a) * basis.a(b)).trace();
            EXPECT_NEAR(std::abs(inner - (a == b ? d : 0.0)), 0.0, 1e-10);
        }
        total += basis.a(a);
    }
    EXPECT_LT(max_abs_diff(total, d * ComplexMatrix::Identity(basis.dim(), basis.dim())), 1e-10);
}

TEST_P(BasisProperties, LineSumsAreRankOneProjectors) {
    const OperatorBasis basis(FiniteField::create(GetParam().first, GetParam().second));
    for (std::size_t s = 0; s < basis.space().num_striations(); ++s)
        for (std::size_t c = 0; c < basis.dim(); ++c) {
            const ComplexMatrix proj = line_projector(basis, s, c);
            EXPECT_LT(max_abs_diff(proj * proj, proj), 1e-10);
            EXPECT_NEAR(proj.trace().real(), 1.0, 1e-10);
        }
}

TEST_P(BasisProperties, DisplacementCovariance) {
    const OperatorBasis basis(FiniteField::create(GetParam().first, GetParam().second));
    const auto& space = basis.space();
    for (std::size_t delta = 0; delta < space.num_points(); delta += 2) {
        const ComplexMatrix disp = displacement_operator(basis, space.point(delta));
        EXPECT_LT(max_abs_diff(disp * disp.adjoint(), ComplexMatrix::Identity(basis.dim(), basis.dim())), kTol);
        for (std::size_t a = 0; a < space.num_points(); a += 3)
            EXPECT_LT(max_abs_diff(disp * basis.a(a) * disp.adjoint(), basis.a(space.add_index(a, delta))), 1e-10);
    }
}

TEST_P(BasisProperties, SymplecticCovariance) {
    const OperatorBasis basis(FiniteField::create(GetParam().first, GetParam().second));
    const auto& space = basis.space();
    const auto legal = legal_symplectics(basis.field());
    const std::size_t step = std::max<std::size_t>(1, legal.size() / 9);
    for (std::size_t k = 0; k < legal.size(); k += step) {
        const ComplexMatrix u = symplectic_unitary(basis, legal[k]);
        EXPECT_TRUE(validate_unitary(u).valid());
        const auto perm = point_permutation(space, legal[k]);
        for (std::size_t a = 0; a < space.num_points(); ++a)
            EXPECT_LT(max_abs_diff(u * basis.a(a) * u.adjoint(), basis.a(perm[a])), 1e-10);
    }
}

TEST_P(BasisProperties, SandwichIdentity) {
    const OperatorBasis basis(FiniteField::create(GetParam().first, GetParam().second));
    RandomSource rng(7);
    for (int k = 0; k < 5; ++k) {
        ComplexMatrix m = ComplexMatrix::Random(basis.dim(), basis.dim());
        EXPECT_LT(sandwich_identity_check(basis, m), 1e-10);
    }
    EXPECT_LT(sandwich_identity_check(basis, rng.mixed_state(basis.dim())), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Fields, BasisProperties,
                         ::testing::Values(std::pair{2U, 1U}, std::pair{3U, 1U}, std::pair{5U, 1U}, std::pair{3U, 2U}),
                         [](const auto& info) {
                             return "p" + std::to_string(info.param.first) + "n" + std::to_string(info.param.second);
                         });

TEST(Displacements, QubitShiftIsPauliX) {
    const OperatorBasis basis(FiniteField::create(2, 1));
    const auto& f = basis.field();
    EXPECT_LT(max_abs_diff(displacement_operator(basis, {f.one(), f.zero()}), pauli_x()), kTol);
    EXPECT_LT(max_abs_diff(displacement_operator(basis, {f.zero(), f.one()}), pauli_z()), kTol);
}

TEST(Displacements, ExpansionRejectsQubits) {
    const OperatorBasis basis(FiniteField::create(2, 1));
    try {
        a_from_displacements(basis, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "UnsupportedDimension");
    }
}

TEST(SymplecticUnitaries, QubitRMatchesUpToPhase) {
    const OperatorBasis basis(FiniteField::create(2, 1));
    const ComplexMatrix expected = (ComplexMatrix(2, 2) << 1, 1, 1i, -1i).finished() / std::sqrt(2.0);
    const ComplexMatrix u = symplectic_unitary(basis, legal_symplectics(basis.field())[1]);
    // Fix the global phase on the first entry.
    const Complex phase = expected(0, 0) / u(0, 0);
    EXPECT_NEAR(std::abs(phase), 1.0, kTol);
    EXPECT_LT(max_abs_diff(phase * u, expected), kTol);
}

TEST(SymplecticUnitaries, IllegalQubitMatrixThrows) {
    const OperatorBasis basis(FiniteField::create(2, 1));
    const auto& f = basis.field();
    try {
        symplectic_unitary(basis, {f.zero(), f.one(), f.one(), f.zero()});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "IllegalSymplectic");
    }
}

bool has(const ValidationReport& r, const std::string& condition) {
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const Violation& v) { return v.condition == condition; });
}

TEST(Validation, States) {
    RandomSource rng(11);
    EXPECT_TRUE(validate_state(rng.mixed_state(3)).valid());
    EXPECT_TRUE(has(validate_state(2.0 * rng.mixed_state(3)), "unit-trace"));
    EXPECT_TRUE(has(validate_state(ComplexMatrix::Random(3, 3)), "hermitian"));
    const ComplexMatrix negative = (ComplexMatrix(2, 2) << 1.5, 0, 0, -0.5).finished();
    EXPECT_TRUE(has(validate_state(negative), "positive-semidefinite"));
    EXPECT_TRUE(has(validate_state(ComplexMatrix::Identity(2, 3)), "square"));
}

TEST(Validation, Channels) {
    RandomSource rng(12);
    EXPECT_TRUE(validate_channel(rng.unital_channel(3), 3).valid());
    // Amplitude damping is trace preserving but not unital.
    const double g = 0.3;
    Channel damping{{(ComplexMatrix(2, 2) << 1, 0, 0, std::sqrt(1 - g)).finished(),
                     (ComplexMatrix(2, 2) << 0, std::sqrt(g), 0, 0).finished()}};
    const auto report = validate_channel(damping, 2);
    EXPECT_TRUE(has(report, "unital"));
    EXPECT_FALSE(has(report, "trace-preserving"));
    EXPECT_TRUE(has(validate_channel(Channel{}, 2), "nonempty-kraus"));
    EXPECT_TRUE(has(validate_channel(Channel{{0.5 * ComplexMatrix::Identity(2, 2)}}, 2), "trace-preserving"));
}

TEST(Validation, EffectsAndUnitaries) {
    RandomSource rng(13);
    EXPECT_TRUE(validate_effect(rng.effect(3)).valid());
    EXPECT_TRUE(has(validate_effect(2.0 * ComplexMatrix::Identity(2, 2)), "bounded-by-identity"));
    EXPECT_TRUE(has(validate_effect(-ComplexMatrix::Identity(2, 2)), "positive-semidefinite"));
    EXPECT_TRUE(validate_unitary(rng.unitary(4)).valid());
    EXPECT_TRUE(has(validate_unitary(2.0 * ComplexMatrix::Identity(2, 2)), "unitary"));
    EXPECT_EQ(to_string(ObjectKind::PovmElement), "povm-element");
}

TEST(Channels, ComposeMatchesSequentialApplication) {
    RandomSource rng(14);
    const auto first = rng.unital_channel(3);
    const auto second = rng.unital_channel(3, 2);
    const auto rho = rng.mixed_state(3);
    EXPECT_LT(max_abs_diff(apply_channel(compose(first, second), rho), apply_channel(second, apply_channel(first, rho))),
              kTol);
    const auto u = rng.unitary(3);
    EXPECT_LT(max_abs_diff(apply_channel(unitary_channel(u), rho), u * rho * u.adjoint()), kTol);
}

TEST(Basis, SharedInstancePerField) {
    const auto f = FiniteField::create(5, 1);
    EXPECT_EQ(operator_basis(f).get(), operator_basis(f).get());
}

}  // namespace
}  // namespace erps
