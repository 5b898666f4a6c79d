#include "erps/field.hpp"

#include <algorithm>
#include <sstream>

#include "erps/error.hpp"

namespace erps {

namespace {

std::uint32_t mod_p(std::int64_t v, std::uint32_t p) {
    auto r = v % static_cast<std::int64_t>(p);
    return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

// Remainder of `num` modulo the monic polynomial `den` over Z_p.
Polynomial poly_rem(Polynomial num, const Polynomial& den, std::uint32_t p) {
    const std::size_t dd = den.size() - 1;
    while (num.size() > dd) {
        const std::uint32_t lead = num.back();
        const std::size_t shift = num.size() - 1 - dd;
        if (lead != 0) {
            for (std::size_t i = 0; i <= dd; ++i) {
                num[shift + i] = mod_p(static_cast<std::int64_t>(num[shift + i]) -
                                           static_cast<std::int64_t>(lead) * den[i],
                                       p);
            }
        }
        num.pop_back();
    }
    return num;
}

}  // namespace

bool is_prime(std::uint64_t value) {
    if (value < 2) return false;
    for (std::uint64_t k = 2; k * k <= value; ++k) {
        if (value % k == 0) return false;
    }
    return true;
}

bool is_irreducible(const Polynomial& poly, std::uint32_t p) {
    const std::size_t deg = poly.size() - 1;
    if (deg == 0) return false;
    if (deg == 1) return true;
    for (std::size_t fd = 1; fd <= deg / 2; ++fd) {
        // Enumerate monic factors of degree fd.
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < fd; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            Polynomial f(fd + 1);
            std::uint64_t c = code;
            for (std::size_t i = 0; i < fd; ++i) {
                f[i] = static_cast<std::uint32_t>(c % p);
                c /= p;
            }
            f[fd] = 1;
            auto r = poly_rem(poly, f, p);
            if (std::all_of(r.begin(), r.end(), [](auto v) { return v == 0; })) return false;
        }
    }
    return true;
}

Polynomial default_modulus(std::uint32_t p, std::uint32_t n) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < n; ++i) count *= p;
    // code enumerates (c_{n-1}, ..., c_0) with c_0 least significant.
    for (std::uint64_t code = 0; code < count; ++code) {
        Polynomial poly(n + 1);
        std::uint64_t c = code;
        for (std::uint32_t i = 0; i < n; ++i) {
            poly[i] = static_cast<std::uint32_t>(c % p);
            c /= p;
        }
        poly[n] = 1;
        if (is_irreducible(poly, p)) return poly;
    }
    throw Error("ReducibleModulus", "no irreducible polynomial found");
}

struct FiniteField::Impl {
    std::uint32_t p = 0;
    std::uint32_t n = 0;
    std::uint32_t d = 0;
    Polynomial modulus;
    std::vector<std::vector<std::uint32_t>> coeffs;  // per index, little-endian
    std::vector<std::uint32_t> add_table;
    std::vector<std::uint32_t> mul_table;
    std::vector<std::uint32_t> neg_table;
    std::vector<std::uint32_t> inv_table;
    std::vector<std::uint32_t> frob_table;

    std::uint32_t index_of(const std::vector<std::uint32_t>& c) const {
        std::uint32_t idx = 0;
        for (std::uint32_t i = 0; i < n; ++i) idx = idx * p + c[i];
        return idx;
    }
};

FiniteField FiniteField::create(std::uint32_t p, std::uint32_t n, std::optional<Polynomial> modulus) {
    if (!is_prime(p)) {
        throw Error("NonPrimeCharacteristic", "characteristic " + std::to_string(p) + " is not prime");
    }
    if (n == 0) throw Error("InvalidDegree", "extension degree must be positive");
    if (p == 2 && n > 1) {
        throw Error("UnsupportedEvenExtension",
                    "characteristic-2 extensions have no canonical phase-point operators");
    }
    std::uint64_t d = 1;
    for (std::uint32_t i = 0; i < n; ++i) d *= p;
    if (d > kMaxOrder) {
        throw Error("FieldTooLarge", "field order " + std::to_string(d) + " exceeds supported maximum");
    }

    auto impl = std::make_shared<Impl>();
    impl->p = p;
    impl->n = n;
    impl->d = static_cast<std::uint32_t>(d);
    if (modulus) {
        if (modulus->size() != n + 1 || modulus->back() != 1 ||
            std::any_of(modulus->begin(), modulus->end(), [p](auto c) { return c >= p; })) {
            throw Error("InvalidModulus", "modulus must be monic of degree n with coefficients in [0, p)");
        }
        if (!is_irreducible(*modulus, p)) throw Error("ReducibleModulus", "modulus is reducible over Z_p");
        impl->modulus = *modulus;
    } else {
        impl->modulus = default_modulus(p, n);
    }

    const std::uint32_t dd = impl->d;
    impl->coeffs.resize(dd);
    for (std::uint32_t idx = 0; idx < dd; ++idx) {
        std::vector<std::uint32_t> c(n);
        std::uint32_t v = idx;
        for (std::uint32_t i = 0; i < n; ++i) {
            c[n - 1 - i] = v % p;
            v /= p;
        }
        impl->coeffs[idx] = std::move(c);
    }

    impl->add_table.resize(static_cast<std::size_t>(dd) * dd);
    impl->mul_table.resize(static_cast<std::size_t>(dd) * dd);
    impl->neg_table.resize(dd);
    for (std::uint32_t a = 0; a < dd; ++a) {
        const auto& ca = impl->coeffs[a];
        std::vector<std::uint32_t> neg(n);
        for (std::uint32_t i = 0; i < n; ++i) neg[i] = (p - ca[i]) % p;
        impl->neg_table[a] = impl->index_of(neg);
        for (std::uint32_t b = 0; b < dd; ++b) {
            const auto& cb = impl->coeffs[b];
            std::vector<std::uint32_t> sum(n);
            for (std::uint32_t i = 0; i < n; ++i) sum[i] = (ca[i] + cb[i]) % p;
            impl->add_table[static_cast<std::size_t>(a) * dd + b] = impl->index_of(sum);

            Polynomial prod(2 * n - 1, 0);
            for (std::uint32_t i = 0; i < n; ++i) {
                for (std::uint32_t j = 0; j < n; ++j) {
                    prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
                }
            }
            auto rem = poly_rem(std::move(prod), impl->modulus, p);
            rem.resize(n, 0);
            impl->mul_table[static_cast<std::size_t>(a) * dd + b] = impl->index_of(rem);
        }
    }

    const std::uint32_t one = impl->index_of([&] {
        std::vector<std::uint32_t> c(n, 0);
        c[0] = 1;
        return c;
    }());
    impl->inv_table.assign(dd, 0);
    for (std::uint32_t a = 1; a < dd; ++a) {
        for (std::uint32_t b = 1; b < dd; ++b) {
            if (impl->mul_table[static_cast<std::size_t>(a) * dd + b] == one) {
                impl->inv_table[a] = b;
                break;
            }
        }
    }
    impl->frob_table.resize(dd);
    for (std::uint32_t a = 0; a < dd; ++a) {
        std::uint32_t r = one;
        for (std::uint32_t k = 0; k < p; ++k) r = impl->mul_table[static_cast<std::size_t>(r) * dd + a];
        impl->frob_table[a] = r;
    }
    return FiniteField(std::move(impl));
}

std::uint32_t FiniteField::characteristic() const { return impl_->p; }
std::uint32_t FiniteField::degree() const { return impl_->n; }
std::uint32_t FiniteField::order() const { return impl_->d; }
const Polynomial& FiniteField::modulus() const { return impl_->modulus; }

FieldElement FiniteField::one() const { return from_int(1); }

FieldElement FiniteField::xi() const {
    if (impl_->n == 1) return one();
    std::vector<std::uint32_t> c(impl_->n, 0);
    c[1] = 1;
    return {impl_->index_of(c)};
}

FieldElement FiniteField::from_int(std::int64_t k) const {
    std::vector<std::uint32_t> c(impl_->n, 0);
    c[0] = mod_p(k, impl_->p);
    return {impl_->index_of(c)};
}

FieldElement FiniteField::from_coeffs(std::span<const std::uint32_t> coeffs) const {
    if (coeffs.size() != impl_->n) throw Error("InvalidElement", "coefficient array has wrong length");
    std::vector<std::uint32_t> c(coeffs.begin(), coeffs.end());
    for (auto v : c) {
        if (v >= impl_->p) throw Error("InvalidElement", "coefficient out of range");
    }
    return {impl_->index_of(c)};
}

FieldElement FiniteField::element(std::size_t index) const {
    if (index >= impl_->d) throw Error("InvalidElement", "element index out of range");
    return {static_cast<std::uint32_t>(index)};
}

std::vector<FieldElement> FiniteField::elements() const {
    std::vector<FieldElement> out(impl_->d);
    for (std::uint32_t i = 0; i < impl_->d; ++i) out[i] = {i};
    return out;
}

std::vector<std::uint32_t> FiniteField::coeffs(FieldElement x) const { return impl_->coeffs.at(x.index); }

FieldElement FiniteField::add(FieldElement a, FieldElement b) const {
    return {impl_->add_table[static_cast<std::size_t>(a.index) * impl_->d + b.index]};
}

FieldElement FiniteField::sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

FieldElement FiniteField::neg(FieldElement a) const { return {impl_->neg_table[a.index]}; }

FieldElement FiniteField::mul(FieldElement a, FieldElement b) const {
    return {impl_->mul_table[static_cast<std::size_t>(a.index) * impl_->d + b.index]};
}

FieldElement FiniteField::inv(FieldElement a) const {
    if (a.index == 0) throw Error("DivisionByZero", "inverse of zero");
    return {impl_->inv_table[a.index]};
}

FieldElement FiniteField::div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

FieldElement FiniteField::pow(FieldElement a, std::uint64_t k) const {
    FieldElement result = one();
    FieldElement base = a;
    while (k > 0) {
        if (k & 1U) result = mul(result, base);
        base = mul(base, base);
        k >>= 1U;
    }
    return result;
}

FieldElement FiniteField::frobenius(FieldElement x, std::uint32_t times) const {
    for (std::uint32_t i = 0; i < times; ++i) x = {impl_->frob_table[x.index]};
    return x;
}

FieldElement FiniteField::relative_trace(FieldElement x, std::uint32_t sub_degree) const {
    if (sub_degree == 0 || impl_->n % sub_degree != 0) {
        throw Error("NotASubfield", "F_{p^" + std::to_string(sub_degree) + "} is not a subfield of F_{p^" +
                                        std::to_string(impl_->n) + "}");
    }
    FieldElement sum = zero();
    FieldElement term = x;
    for (std::uint32_t i = 0; i < impl_->n / sub_degree; ++i) {
        sum = add(sum, term);
        term = frobenius(term, sub_degree);
    }
    return sum;
}

std::uint32_t FiniteField::trace(FieldElement x) const { return prime_value(relative_trace(x, 1)); }

std::uint32_t FiniteField::matrix_trace(FieldElement x) const {
    // Column j of the multiplication matrix holds the coefficients of x ξ^j.
    std::uint32_t tr = 0;
    FieldElement basis_elem = one();
    for (std::uint32_t j = 0; j < impl_->n; ++j) {
        tr = (tr + impl_->coeffs[mul(x, basis_elem).index][j]) % impl_->p;
        basis_elem = mul(basis_elem, xi());
    }
    return tr;
}

bool FiniteField::in_subfield(FieldElement x, std::uint32_t sub_degree) const {
    if (sub_degree == 0 || impl_->n % sub_degree != 0) return false;
    return frobenius(x, sub_degree) == x;
}

std::uint32_t FiniteField::prime_value(FieldElement x) const {
    const auto& c = impl_->coeffs.at(x.index);
    for (std::uint32_t i = 1; i < impl_->n; ++i) {
        if (c[i] != 0) throw Error("NotASubfield", "element is not in the prime subfield");
    }
    return c[0];
}

std::string FiniteField::format(FieldElement x) const {
    const auto& c = impl_->coeffs.at(x.index);
    std::ostringstream os;
    bool first = true;
    for (std::uint32_t i = 0; i < impl_->n; ++i) {
        if (c[i] == 0) continue;
        if (!first) os << '+';
        first = false;
        if (i == 0) {
            os << c[i];
        } else {
            if (c[i] != 1) os << c[i];
            os << "xi";
            if (i > 1) os << '^' << i;
        }
    }
    if (first) os << '0';
    return os.str();
}

bool FiniteField::operator==(const FiniteField& other) const {
    return impl_ == other.impl_ ||
           (impl_->p == other.impl_->p && impl_->n == other.impl_->n && impl_->modulus == other.impl_->modulus);
}

FieldBasis polynomial_basis(const FiniteField& field, std::uint32_t subfield_degree) {
    const std::uint32_t n = field.degree();
    if (subfield_degree == 0 || n % subfield_degree != 0) {
        throw Error("NotASubfield", "basis subfield degree must divide the field degree");
    }
    FieldBasis basis;
    basis.subfield_degree = subfield_degree;
    FieldElement e = field.one();
    for (std::uint32_t j = 0; j < n / subfield_degree; ++j) {
        basis.elements.push_back(e);
        e = field.mul(e, field.xi());
    }
    return basis;
}

std::vector<std::vector<FieldElement>> trace_gram(const FiniteField& field, const FieldBasis& basis) {
    const std::size_t m = basis.elements.size();
    std::vector<std::vector<FieldElement>> gram(m, std::vector<FieldElement>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            gram[i][j] = field.relative_trace(field.mul(basis.elements[i], basis.elements[j]),
                                              basis.subfield_degree);
        }
    }
    return gram;
}

FieldBasis dual_basis(const FiniteField& field, const FieldBasis& basis) {
    const std::uint32_t s = basis.subfield_degree;
    if (s == 0 || field.degree() % s != 0) throw Error("NotASubfield", "invalid basis subfield");
    const std::size_t m = basis.elements.size();
    if (m != field.degree() / s) throw Error("SingularGramMatrix", "basis has the wrong number of elements");
    for (auto e : basis.elements) {
        if (e == field.zero()) throw Error("SingularGramMatrix", "basis contains zero");
    }

    // Solve C G = I over the subfield; the dual element f_i = Σ_k C_ik e_k.
    auto gram = trace_gram(field, basis);
    // Augmented [G^T | I]; row-reduce to obtain (G^T)^{-1} = C^T.
    std::vector<std::vector<FieldElement>> aug(m, std::vector<FieldElement>(2 * m, field.zero()));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) aug[i][j] = gram[j][i];
        aug[i][m + i] = field.one();
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        while (pivot < m && aug[pivot][col] == field.zero()) ++pivot;
        if (pivot == m) throw Error("SingularGramMatrix", "basis elements are linearly dependent");
        std::swap(aug[pivot], aug[col]);
        const FieldElement scale = field.inv(aug[col][col]);
        for (auto& v : aug[col]) v = field.mul(v, scale);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || aug[r][col] == field.zero()) continue;
            const FieldElement factor = aug[r][col];
            for (std::size_t c = 0; c < 2 * m; ++c) {
                aug[r][c] = field.sub(aug[r][c], field.mul(factor, aug[col][c]));
            }
        }
    }
    // aug right half = (G^T)^{-1} = C^T, so C_ik = aug[k][m + i].
    FieldBasis dual;
    dual.subfield_degree = s;
    for (std::size_t i = 0; i < m; ++i) {
        FieldElement f = field.zero();
        for (std::size_t k = 0; k < m; ++k) {
            f = field.add(f, field.mul(aug[k][m + i], basis.elements[k]));
        }
        dual.elements.push_back(f);
    }
    return dual;
}

std::vector<FieldElement> expand(const FiniteField& field, FieldElement x, const FieldBasis& basis,
                                 const FieldBasis& dual) {
    std::vector<FieldElement> out;
    out.reserve(basis.elements.size());
    for (auto f : dual.elements) {
        out.push_back(field.relative_trace(field.mul(x, f), basis.subfield_degree));
    }
    return out;
}

}  // namespace erps
