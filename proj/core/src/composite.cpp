#include "erps/composite.hpp"

#include <algorithm>

#include <unsupported/Eigen/KroneckerProduct>

#include "erps/error.hpp"

namespace erps {

namespace {

FiniteField make_base(const FiniteField& field, std::uint32_t sub_degree) {
    if (sub_degree == 0 || field.degree() % sub_degree != 0) {
        throw Error("NotASubfield", "particle field degree must divide the field degree");
    }
    return FiniteField::create(field.characteristic(), sub_degree);
}

// Image of the stand-alone F_r inside F_d, via a root of F_r's modulus.
std::vector<FieldElement> build_embedding(const FiniteField& field, const FiniteField& base) {
    std::vector<FieldElement> embed(base.order());
    if (base.degree() == 1) {
        for (std::uint32_t k = 0; k < base.order(); ++k) embed[k] = field.from_int(k);
        return embed;
    }
    const auto& mod = base.modulus();
    std::optional<FieldElement> root;
    for (auto x : field.elements()) {
        FieldElement value = field.zero();
        FieldElement power = field.one();
        for (auto c : mod) {
            value = field.add(value, field.mul(field.from_int(c), power));
            power = field.mul(power, x);
        }
        if (value == field.zero()) {
            root = x;
            break;
        }
    }
    if (!root) throw Error("NotASubfield", "particle field does not embed into the field");
    for (std::uint32_t k = 0; k < base.order(); ++k) {
        const auto coeffs = base.coeffs(FieldElement{k});
        FieldElement value = field.zero();
        FieldElement power = field.one();
        for (auto c : coeffs) {
            value = field.add(value, field.mul(field.from_int(c), power));
            power = field.mul(power, *root);
        }
        embed[k] = value;
    }
    return embed;
}

}  // namespace

ParticleDecomposition::ParticleDecomposition(FiniteField field, std::uint32_t sub_degree,
                                             std::optional<std::vector<FieldElement>> q_basis)
    : field_(std::move(field)), base_(make_base(field_, sub_degree)), particles_(field_.degree() / sub_degree) {
    embed_ = build_embedding(field_, base_);
    unembed_.assign(field_.order(), -1);
    for (std::uint32_t k = 0; k < base_.order(); ++k) unembed_[embed_[k].index] = k;

    if (q_basis) {
        if (q_basis->size() != particles_) throw Error("SingularGramMatrix", "basis must have one element per particle");
        q_basis_ = FieldBasis{*q_basis, sub_degree};
    } else {
        q_basis_ = polynomial_basis(field_, sub_degree);
    }
    p_basis_ = dual_basis(field_, q_basis_);

    const std::uint32_t d = field_.order();
    const std::uint32_t r = base_.order();
    kron_.resize(d);
    for (std::uint32_t k = 0; k < d; ++k) {
        std::size_t idx = 0;
        for (auto c : expand(field_, FieldElement{k}, q_basis_, p_basis_)) idx = idx * r + restrict_to_base(c).index;
        kron_[k] = idx;
    }
    first_point_.resize(static_cast<std::size_t>(d) * d);
    for (std::size_t pt = 0; pt < first_point_.size(); ++pt) {
        const PhasePoint alpha{FieldElement{static_cast<std::uint32_t>(pt / d)},
                               FieldElement{static_cast<std::uint32_t>(pt % d)}};
        const PhasePoint first = particle_coords(alpha).front();
        first_point_[pt] = static_cast<std::size_t>(first.q.index) * r + first.p.index;
    }
}

FieldElement ParticleDecomposition::restrict_to_base(FieldElement large) const {
    const auto k = unembed_.at(large.index);
    if (k < 0) throw Error("NotASubfield", "element does not lie in the particle field");
    return FieldElement{static_cast<std::uint32_t>(k)};
}

std::vector<PhasePoint> ParticleDecomposition::particle_coords(PhasePoint alpha) const {
    const std::uint32_t s = q_basis_.subfield_degree;
    std::vector<PhasePoint> coords(particles_);
    for (std::uint32_t j = 0; j < particles_; ++j) {
        coords[j].q = restrict_to_base(field_.relative_trace(field_.mul(alpha.q, p_basis_.elements[j]), s));
        coords[j].p = restrict_to_base(field_.relative_trace(field_.mul(alpha.p, q_basis_.elements[j]), s));
    }
    return coords;
}

PhasePoint ParticleDecomposition::from_particle_coords(std::span<const PhasePoint> coords) const {
    if (coords.size() != particles_) throw Error("DimensionMismatch", "wrong number of particle coordinates");
    PhasePoint alpha{field_.zero(), field_.zero()};
    for (std::uint32_t j = 0; j < particles_; ++j) {
        alpha.q = field_.add(alpha.q, field_.mul(embed(coords[j].q), q_basis_.elements[j]));
        alpha.p = field_.add(alpha.p, field_.mul(embed(coords[j].p), p_basis_.elements[j]));
    }
    return alpha;
}

std::vector<FieldElement> ParticleDecomposition::basis_with_particle_first(std::span<const FieldElement> basis,
                                                                           std::size_t j) {
    if (j >= basis.size()) throw Error("InvalidParticle", "particle index out of range");
    std::vector<FieldElement> out(basis.begin(), basis.end());
    std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(j), out.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    return out;
}

namespace {

ComplexMatrix to_kronecker_order(const ParticleDecomposition& dec, const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        const auto kk = static_cast<Eigen::Index>(dec.kronecker_index(FieldElement{static_cast<std::uint32_t>(k)}));
        for (Eigen::Index l = 0; l < m.cols(); ++l) {
            const auto kl = static_cast<Eigen::Index>(dec.kronecker_index(FieldElement{static_cast<std::uint32_t>(l)}));
            out(kk, kl) = m(k, l);
        }
    }
    return out;
}

}  // namespace

double factorization_check(const ParticleDecomposition& dec) {
    if (dec.base().characteristic() == 2) throw Error("UnsupportedDimension", "factorization requires odd r");
    const auto large = operator_basis(dec.field());
    const auto small = operator_basis(dec.base());
    double worst = 0.0;
    for (std::size_t pt = 0; pt < large->num_points(); ++pt) {
        const auto coords = dec.particle_coords(large->space().point(pt));
        ComplexMatrix product = small->a(small->space().index(coords.front()));
        for (std::size_t j = 1; j < coords.size(); ++j) {
            product = Eigen::kroneckerProduct(product, small->a(small->space().index(coords[j]))).eval();
        }
        worst = std::max(worst, max_abs_diff(to_kronecker_order(dec, large->a(pt)), product));
    }
    return worst;
}

SlopeClass classify_slope(const ParticleDecomposition& dec, const PhaseSpace& space, std::size_t striation) {
    SlopeClass out;
    const auto& f = dec.field();
    const Slope slope = space.slope(striation);
    if (slope.infinite) {
        out.kind = SlopeClass::Kind::InfiniteSlope;
        out.base_striation = dec.base().order();
        return out;
    }
    const FieldElement y = f.mul(dec.q_basis().elements.front(), slope.value);
    const std::uint32_t s = dec.q_basis().subfield_degree;
    for (auto e : dec.q_basis().elements) {
        out.coefficients.push_back(dec.restrict_to_base(f.relative_trace(f.mul(y, e), s)));
    }
    const bool contributes = std::all_of(out.coefficients.begin() + 1, out.coefficients.end(),
                                         [](FieldElement c) { return c.index == 0; });
    if (contributes) {
        out.kind = SlopeClass::Kind::MapsToSlope;
        out.base_striation = out.coefficients.front().index;
    }
    return out;
}

std::vector<double> sum_to_first_particle(const ParticleDecomposition& dec, std::span<const double> values) {
    const std::size_t r = dec.base().order();
    std::vector<double> out(r * r, 0.0);
    for (std::size_t pt = 0; pt < values.size(); ++pt) out[dec.first_particle_point(pt)] += values[pt];
    return out;
}

StateQuasi partial_trace_wigner(const ParticleDecomposition& dec, const StateQuasi& q) {
    if (dec.base().characteristic() == 2) throw Error("UnsupportedDimension", "partial trace requires odd r");
    return {dec.base().order(), sum_to_first_particle(dec, q.values)};
}

std::vector<RestrictedState> partial_trace_restricted(const ParticleDecomposition& dec, const PhaseSpace& space,
                                                      std::span<const RestrictedState> family) {
    if (family.size() != space.num_striations()) {
        throw Error("IncompleteFamily", "partial trace needs one restricted state per striation");
    }
    const std::size_t r = dec.base().order();
    const PhaseSpace small(dec.base());
    std::vector<std::optional<RestrictedState>> slots(r + 1);
    for (const auto& member : family) {
        const auto cls = classify_slope(dec, space, member.striation);
        if (cls.kind == SlopeClass::Kind::UniformCovering) continue;
        RestrictedState out;
        out.striation = cls.base_striation;
        out.values = sum_to_first_particle(dec, member.values);
        out.lines.assign(r, 0.0);
        for (std::size_t c = 0; c < r; ++c) {
            for (auto pt : small.points_on(out.striation, c)) out.lines[c] += out.values[pt];
        }
        out.min_raw = *std::min_element(out.lines.begin(), out.lines.end());
        slots[out.striation] = std::move(out);
    }
    std::vector<RestrictedState> result;
    for (auto& slot : slots) {
        if (!slot) throw Error("IncompleteFamily", "family does not cover every particle striation");
        result.push_back(std::move(*slot));
    }
    return result;
}

ComplexMatrix partial_trace_density(const ParticleDecomposition& dec, const ComplexMatrix& w) {
    const auto r = static_cast<Eigen::Index>(dec.base().order());
    const Eigen::Index rest = w.rows() / r;
    const ComplexMatrix kw = to_kronecker_order(dec, w);
    ComplexMatrix out = ComplexMatrix::Zero(r, r);
    for (Eigen::Index a = 0; a < r; ++a) {
        for (Eigen::Index b = 0; b < r; ++b) {
            for (Eigen::Index t = 0; t < rest; ++t) out(a, b) += kw(a * rest + t, b * rest + t);
        }
    }
    return out;
}

}  // namespace erps
