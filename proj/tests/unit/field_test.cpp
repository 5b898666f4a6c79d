#include <gtest/gtest.h>

#include "erps/error.hpp"
#include "erps/field.hpp"

namespace erps {
namespace {

// Schoolbook polynomial arithmetic over Z_p, reduced by a monic modulus.
std::vector<std::uint32_t> poly_mul_mod(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                        const Polynomial& modulus, std::uint32_t p) {
    const std::size_t n = modulus.size() - 1;
    std::vector<std::uint64_t> prod(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
    for (std::size_t k = prod.size(); k-- > n;) {
        const std::uint64_t c = prod[k];
        if (c == 0) continue;
        for (std::size_t i = 0; i <= n; ++i) prod[k - n + i] = (prod[k - n + i] + (p - c) * modulus[i]) % p;
    }
    return {prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<std::vector<std::uint32_t>> all_coeffs(std::uint32_t p, std::uint32_t n) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> c(n, 0);
    for (;;) {
        out.push_back(c);
        std::size_t k = 0;
        while (k < n && ++c[k] == p) c[k++] = 0;
        if (k == n) break;
    }
    return out;
}

struct FieldCase {
    std::uint32_t p;
    std::uint32_t n;
};

class FieldArithmetic : public ::testing::TestWithParam<FieldCase> {};

TEST_P(FieldArithmetic, MultiplicationMatchesPolynomialOracle) {
    const auto [p, n] = GetParam();
    const auto field = FiniteField::create(p, n);
    const auto coeffs = all_coeffs(p, n);
    for (const auto& a : coeffs) {
        for (const auto& b : coeffs) {
            const auto got = field.coeffs(field.mul(field.from_coeffs(a), field.from_coeffs(b)));
            EXPECT_EQ(got, poly_mul_mod(a, b, field.modulus(), p));
        }
    }
}

TEST_P(FieldArithmetic, FieldAxioms) {
    const auto [p, n] = GetParam();
    const auto field = FiniteField::create(p, n);
    for (auto x : field.elements()) {
        EXPECT_EQ(field.add(x, field.neg(x)), field.zero());
        EXPECT_EQ(field.mul(x, field.one()), x);
        if (x != field.zero()) EXPECT_EQ(field.mul(x, field.inv(x)), field.one());
        for (auto y : field.elements()) {
            EXPECT_EQ(field.add(x, y), field.add(y, x));
            EXPECT_EQ(field.mul(x, y), field.mul(y, x));
            EXPECT_EQ(field.sub(field.add(x, y), y), x);
        }
    }
}

TEST_P(FieldArithmetic, TraceIsAdditiveAndBasisIndependent) {
    const auto [p, n] = GetParam();
    const auto field = FiniteField::create(p, n);
    for (auto x : field.elements()) {
        // Frobenius-orbit sum against the multiplication-matrix trace.
        EXPECT_EQ(field.trace(x), field.matrix_trace(x));
        EXPECT_EQ(field.trace(field.frobenius(x)), field.trace(x));
        for (auto y : field.elements()) EXPECT_EQ(field.trace(field.add(x, y)), (field.trace(x) + field.trace(y)) % p);
    }
}

TEST_P(FieldArithmetic, DualBasisPairing) {
    const auto [p, n] = GetParam();
    const auto field = FiniteField::create(p, n);
    const auto basis = polynomial_basis(field);
    const auto dual = dual_basis(field, basis);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            EXPECT_EQ(field.trace(field.mul(basis.elements[i], dual.elements[j])), i == j ? 1U : 0U);
    const auto back = dual_basis(field, dual);
    EXPECT_EQ(back.elements, basis.elements);
    for (auto x : field.elements()) {
        const auto c = expand(field, x, basis, dual);
        FieldElement sum = field.zero();
        for (std::size_t j = 0; j < n; ++j) sum = field.add(sum, field.mul(c[j], basis.elements[j]));
        EXPECT_EQ(sum, x);
    }
}

INSTANTIATE_TEST_SUITE_P(Fields, FieldArithmetic,
                         ::testing::Values(FieldCase{2, 1}, FieldCase{3, 1}, FieldCase{5, 1}, FieldCase{7, 1},
                                           FieldCase{3, 2}, FieldCase{5, 2}, FieldCase{3, 3}),
                         [](const auto& info) {
                             return "p" + std::to_string(info.param.p) + "n" + std::to_string(info.param.n);
                         });

TEST(Field, NineElementFieldHasXiSquaredTwo) {
    const auto field = FiniteField::create(3, 2, Polynomial{1, 0, 1});
    EXPECT_EQ(field.mul(field.xi(), field.xi()), field.from_int(2));
    EXPECT_EQ(default_modulus(3, 2), (Polynomial{1, 0, 1}));
}

TEST(Field, PrimeFieldIsIntegersModP) {
    const auto field = FiniteField::create(3, 1);
    EXPECT_EQ(field.order(), 3U);
    EXPECT_EQ(field.add(field.from_int(2), field.from_int(2)), field.from_int(1));
    const auto z5 = FiniteField::create(5, 1);
    EXPECT_EQ(z5.inv(z5.from_int(2)), z5.from_int(3));
}

TEST(Field, TraceExamples) {
    const auto field = FiniteField::create(3, 2, Polynomial{1, 0, 1});
    EXPECT_EQ(field.trace(field.xi()), 0U);
    EXPECT_EQ(field.trace(field.one()), 2U);
}

TEST(Field, DualOfOneXiIsTwoXi) {
    const auto field = FiniteField::create(3, 2, Polynomial{1, 0, 1});
    const auto dual = dual_basis(field, polynomial_basis(field));
    ASSERT_EQ(dual.elements.size(), 2U);
    EXPECT_EQ(dual.elements[0], field.from_int(2));
    EXPECT_EQ(dual.elements[1], field.xi());
    const auto prime = FiniteField::create(5, 1);
    EXPECT_EQ(dual_basis(prime, polynomial_basis(prime)).elements, std::vector<FieldElement>{prime.one()});
}

TEST(Field, ElementIndexIsKroneckerOrder) {
    const auto field = FiniteField::create(3, 2);
    // a + bξ sits at index 3a + b.
    for (std::uint32_t a = 0; a < 3; ++a)
        for (std::uint32_t b = 0; b < 3; ++b) {
            const std::uint32_t c[] = {a, b};
            EXPECT_EQ(field.from_coeffs(c).index, 3 * a + b);
        }
}

TEST(Field, RelativeTraceLandsInSubfield) {
    const auto field = FiniteField::create(3, 4);
    for (auto x : field.elements()) EXPECT_TRUE(field.in_subfield(field.relative_trace(x, 2), 2));
    EXPECT_THROW(field.relative_trace(field.one(), 3), Error);
}

TEST(Field, Errors) {
    const auto code = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return std::string("none");
    };
    EXPECT_EQ(code([] { FiniteField::create(6, 1); }), "NonPrimeCharacteristic");
    EXPECT_EQ(code([] { FiniteField::create(2, 2); }), "UnsupportedEvenExtension");
    EXPECT_EQ(code([] { FiniteField::create(3, 2, Polynomial{2, 0, 1}); }), "ReducibleModulus");
    EXPECT_EQ(code([] { FiniteField::create(3, 0); }), "InvalidDegree");
    const auto field = FiniteField::create(5, 1);
    EXPECT_EQ(code([&] { field.inv(field.zero()); }), "DivisionByZero");
}

TEST(Field, Irreducibility) {
    EXPECT_TRUE(is_irreducible({1, 0, 1}, 3));
    EXPECT_FALSE(is_irreducible({1, 0, 1}, 5));  // x² + 1 = (x − 2)(x + 2) mod 5
    EXPECT_TRUE(is_irreducible({2, 0, 1}, 5));
    EXPECT_FALSE(is_irreducible({0, 1, 1}, 3));
}

TEST(Field, FormatIsReadable) {
    const auto field = FiniteField::create(3, 2);
    const std::uint32_t c[] = {1, 2};
    EXPECT_EQ(field.format(field.from_coeffs(c)), "1+2xi");
    EXPECT_EQ(field.format(field.zero()), "0");
}

}  // namespace
}  // namespace erps
