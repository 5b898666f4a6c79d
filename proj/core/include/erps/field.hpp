#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace erps {

/// An element of a finite field, identified by its position in the field's
/// enumeration order. Only meaningful together with the FiniteField that
/// produced it.
///
/// Enumeration order: an element c_0 + c_1 ξ + ... + c_{n-1} ξ^{n-1} has index
/// c_0 p^{n-1} + c_1 p^{n-2} + ... + c_{n-1}. With the polynomial basis this is
/// exactly the Kronecker (tensor-product) ordering of the particle factors.
struct FieldElement {
    std::uint32_t index = 0;

    friend constexpr bool operator==(FieldElement, FieldElement) = default;
    friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

/// Polynomial over Z_p, little-endian coefficients (coeffs[i] multiplies x^i).
using Polynomial = std::vector<std::uint32_t>;

bool is_prime(std::uint64_t value);

/// Exhaustive trial division by every monic polynomial of degree <= deg/2.
bool is_irreducible(const Polynomial& poly, std::uint32_t p);

/// Smallest monic irreducible polynomial of degree n over Z_p, ordering
/// candidates by (c_{n-1}, ..., c_0) lexicographically. Gives x^2 + 1 for F_9.
Polynomial default_modulus(std::uint32_t p, std::uint32_t n);

/// F_{p^n} with p an odd prime, or p = 2 with n = 1.
///
/// Elements are coefficient vectors in the polynomial basis 1, ξ, ..., ξ^{n-1}
/// where ξ is a root of the modulus. Addition and multiplication go through
/// precomputed Cayley tables. Instances are immutable and cheap to copy.
class FiniteField {
public:
    static constexpr std::uint32_t kMaxOrder = 1024;

    static FiniteField create(std::uint32_t p, std::uint32_t n,
                              std::optional<Polynomial> modulus = std::nullopt);

    std::uint32_t characteristic() const;
    std::uint32_t degree() const;
    std::uint32_t order() const;
    const Polynomial& modulus() const;
    bool is_prime_field() const { return degree() == 1; }

    FieldElement zero() const { return {0}; }
    FieldElement one() const;
    /// ξ, the class of x modulo the modulus. Prime fields return one().
    FieldElement xi() const;
    /// Image of an integer in the prime subfield.
    FieldElement from_int(std::int64_t k) const;
    FieldElement from_coeffs(std::span<const std::uint32_t> coeffs) const;
    FieldElement element(std::size_t index) const;
    std::vector<FieldElement> elements() const;
    /// Little-endian coefficients in the polynomial basis.
    std::vector<std::uint32_t> coeffs(FieldElement x) const;

    FieldElement add(FieldElement a, FieldElement b) const;
    FieldElement sub(FieldElement a, FieldElement b) const;
    FieldElement neg(FieldElement a) const;
    FieldElement mul(FieldElement a, FieldElement b) const;
    FieldElement inv(FieldElement a) const;
    FieldElement div(FieldElement a, FieldElement b) const;
    FieldElement pow(FieldElement a, std::uint64_t k) const;

    /// x -> x^(p^times).
    FieldElement frobenius(FieldElement x, std::uint32_t times = 1) const;

    /// Absolute trace Tr_{F_d/F_p}(x) = x + x^p + ... + x^{p^{n-1}}, returned as
    /// an integer in [0, p).
    std::uint32_t trace(FieldElement x) const;

    /// Relative trace to the subfield F_{p^s}: x + x^r + ... + x^{r^{n/s - 1}}
    /// with r = p^s. Result is an element of this field lying in the subfield.
    FieldElement relative_trace(FieldElement x, std::uint32_t sub_degree) const;

    /// Trace of the multiplication-by-x matrix over F_p (basis-dependent route
    /// to the same number as trace()).
    std::uint32_t matrix_trace(FieldElement x) const;

    bool in_subfield(FieldElement x, std::uint32_t sub_degree) const;

    /// Integer value of an element of the prime subfield.
    std::uint32_t prime_value(FieldElement x) const;

    /// Human-readable form, e.g. "1+2xi".
    std::string format(FieldElement x) const;

    bool operator==(const FiniteField& other) const;

private:
    struct Impl;
    explicit FiniteField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Ordered basis of F_d over the subfield F_{p^s}.
struct FieldBasis {
    std::vector<FieldElement> elements;
    std::uint32_t subfield_degree = 1;
};

/// (1, ξ, ..., ξ^{n/s - 1}) over F_{p^s}.
FieldBasis polynomial_basis(const FiniteField& field, std::uint32_t subfield_degree = 1);

/// Gram matrix Tr(e_i e_j) relative to the basis' subfield.
std::vector<std::vector<FieldElement>> trace_gram(const FiniteField& field, const FieldBasis& basis);

/// The unique basis {f_i} with Tr(f_i e_j) = δ_ij. Throws SingularGramMatrix
/// when the input is not a basis.
FieldBasis dual_basis(const FiniteField& field, const FieldBasis& basis);

/// Coordinates of x in `basis` (elements of the subfield), computed through
/// the trace pairing with `dual`.
std::vector<FieldElement> expand(const FiniteField& field, FieldElement x, const FieldBasis& basis,
                                 const FieldBasis& dual);

}  // namespace erps
