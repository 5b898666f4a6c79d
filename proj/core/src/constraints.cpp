#include "erps/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "erps/error.hpp"

namespace erps {

namespace {

void require_odd(const OperatorBasis& basis) {
    if (basis.field().characteristic() == 2) {
        throw Error("UnsupportedDimension", "three-point structure function needs odd d");
    }
}

// ω^{−2 Tr x}
Complex phase_minus_two(const OperatorBasis& basis, FieldElement x) {
    const auto& f = basis.field();
    return basis.omega_tr(f.neg(f.add(x, x)));
}

template <typename Family>
void require_complete(const PhaseSpace& space, std::span<const Family> family) {
    std::vector<bool> seen(space.num_striations(), false);
    for (const auto& member : family) {
        if (member.striation >= seen.size() || seen[member.striation]) {
            throw Error("IncompleteFamily", "family must hold exactly one member per striation");
        }
        seen[member.striation] = true;
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
        throw Error("IncompleteFamily", "family must hold exactly one member per striation");
    }
}

// Σ_{β,γ} Γ_{αβγ} f(β) f(γ) for every α, using
// ⟨α,β⟩ + ⟨β,γ⟩ + ⟨γ,α⟩ = ⟨β − α, γ − α⟩.
std::vector<Complex> quadratic_form(const OperatorBasis& basis, std::span<const double> f) {
    const auto& space = basis.space();
    const auto& field = basis.field();
    const std::size_t n = space.num_points();
    std::vector<Complex> phase(n * n);
    for (std::size_t mu = 0; mu < n; ++mu) {
        for (std::size_t nu = 0; nu < n; ++nu) {
            phase[mu * n + nu] = phase_minus_two(basis, symplectic_product(field, space.point(mu), space.point(nu)));
        }
    }
    std::vector<Complex> out(n);
    for (std::size_t a = 0; a < n; ++a) {
        Complex total = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            const std::size_t mu = space.sub_index(b, a);
            Complex inner = 0.0;
            for (std::size_t c = 0; c < n; ++c) inner += phase[mu * n + space.sub_index(c, a)] * f[c];
            total += f[b] * inner;
        }
        out[a] = total / static_cast<double>(basis.dim());
    }
    return out;
}

ConstraintReport make_report(std::string name, double residual, double tolerance, std::uint64_t samples) {
    return {std::move(name), residual <= tolerance, residual, tolerance, samples};
}

}  // namespace

Complex gamma(const OperatorBasis& basis, std::size_t alpha, std::size_t beta, std::size_t gamma_pt) {
    require_odd(basis);
    const auto& space = basis.space();
    const auto& f = basis.field();
    const PhasePoint a = space.point(alpha);
    const PhasePoint b = space.point(beta);
    const PhasePoint c = space.point(gamma_pt);
    const FieldElement sum =
        f.add(f.add(symplectic_product(f, a, b), symplectic_product(f, b, c)), symplectic_product(f, c, a));
    return phase_minus_two(basis, sum) / static_cast<double>(basis.dim());
}

Complex gamma_direct(const OperatorBasis& basis, std::size_t alpha, std::size_t beta, std::size_t gamma_pt) {
    return (basis.a(alpha) * basis.a(beta) * basis.a(gamma_pt)).trace() / static_cast<double>(basis.dim());
}

ConstraintReport check_pure_state(const OperatorBasis& basis, std::span<const RestrictedState> family,
                                  const ConstraintOptions& options) {
    const auto& space = basis.space();
    require_complete(space, family);
    const StateQuasi q = reconstruct_state(space, family);
    double norm = 0.0;
    for (auto v : q.values) norm += v;
    double residual = std::abs(norm - 1.0);

    if (basis.field().characteristic() == 2) {
        const ComplexMatrix w = state_from_wigner(basis, q);
        residual = std::max(residual, max_abs_diff(w * w, w));
        return make_report("pure-state", residual, options.tolerance, space.num_points());
    }
    const auto rhs = quadratic_form(basis, q.values);
    for (std::size_t a = 0; a < q.values.size(); ++a) residual = std::max(residual, std::abs(rhs[a] - q.values[a]));
    return make_report("pure-state", residual, options.tolerance, space.num_points());
}

ConstraintReport check_pure_measurement(const OperatorBasis& basis, std::span<const RestrictedMeasurement> family,
                                        const ConstraintOptions& options) {
    const auto& space = basis.space();
    require_complete(space, family);
    // A rank-one projector has tr E = 1, so Q(E|α) = Σ_B R^B(E|α) − 1.
    MeasQuasi q = reconstruct_measurement(space, family);
    for (auto& v : q.values) v += q.trace_effect - 1.0;
    const double d = basis.dim();
    double norm = 0.0;
    for (auto v : q.values) norm += v;
    double residual = std::abs(norm - d);

    if (basis.field().characteristic() == 2) {
        const ComplexMatrix e = effect_from_quasi(basis, q);
        residual = std::max(residual, max_abs_diff(e * e, e));
        return make_report("pure-measurement", residual, options.tolerance, space.num_points());
    }
    const auto rhs = quadratic_form(basis, q.values);
    for (std::size_t a = 0; a < q.values.size(); ++a) {
        residual = std::max(residual, std::abs(rhs[a] / d - q.values[a]));
    }
    return make_report("pure-measurement", residual, options.tolerance, space.num_points());
}

ConstraintReport check_unitary_channel(const OperatorBasis& basis, std::span<const RestrictedChannel> family,
                                       const ConstraintOptions& options) {
    const auto& space = basis.space();
    const ChannelQuasi q = reconstruct_channel(space, family);
    const std::size_t n = space.num_points();
    const double d = basis.dim();

    if (basis.field().characteristic() == 2) {
        // The normalized Choi state must be pure.
        const ComplexMatrix choi = choi_from_quasi(basis, q) / d;
        const double purity = (choi * choi).trace().real();
        return make_report("unitary-channel", std::abs(purity - 1.0), options.tolerance, 1);
    }

    // T(α',β',γ') = Σ Q(α'|α) Q(β'|β) Q(γ'|γ) Γ_{αβγ}, with the γ sum done
    // once per γ' as a symplectic Fourier transform F(γ', μ).
    const auto& field = basis.field();
    Eigen::MatrixXcd phase(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t mu = 0; mu < n; ++mu) {
        for (std::size_t nu = 0; nu < n; ++nu) {
            phase(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) =
                phase_minus_two(basis, symplectic_product(field, space.point(mu), space.point(nu)));
        }
    }
    Eigen::MatrixXcd qm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t a = 0; a < n; ++a) {
            qm(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = q.at(b, a);
        }
    }
    const Eigen::MatrixXcd fourier = qm * phase.transpose();

    const auto transformed = [&](std::size_t ap, std::size_t bp, std::size_t cp) {
        Complex total = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            const double qa = q.at(ap, a);
            if (qa == 0.0) continue;
            Complex inner = 0.0;
            for (std::size_t b = 0; b < n; ++b) {
                inner += q.at(bp, b) * phase(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                         fourier(static_cast<Eigen::Index>(cp), static_cast<Eigen::Index>(space.sub_index(b, a)));
            }
            total += qa * inner;
        }
        return total / d;
    };

    double residual = 0.0;
    std::uint64_t samples = 0;
    const auto visit = [&](std::size_t ap, std::size_t bp, std::size_t cp) {
        residual = std::max(residual, std::abs(transformed(ap, bp, cp) - gamma(basis, ap, bp, cp)));
        ++samples;
    };
    if (basis.dim() <= options.exhaustive_max_dim) {
        for (std::size_t ap = 0; ap < n; ++ap)
            for (std::size_t bp = 0; bp < n; ++bp)
                for (std::size_t cp = 0; cp < n; ++cp) visit(ap, bp, cp);
    } else {
        std::mt19937_64 rng(options.seed);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::uint64_t s = 0; s < options.samples; ++s) {
            const std::size_t ap = pick(rng);
            const std::size_t bp = pick(rng);
            visit(ap, bp, pick(rng));
        }
    }
    return make_report("unitary-channel", residual, options.tolerance, samples);
}

std::vector<RestrictedMeasurement> combine_povm_families(
    const OperatorBasis& basis, std::span<const std::vector<RestrictedMeasurement>> families,
    std::span<const double> weights, const ConstraintOptions& options) {
    if (families.size() != weights.size() || families.empty()) {
        throw Error("DimensionMismatch", "one weight per family is required");
    }
    double total = 0.0;
    for (auto c : weights) {
        if (!(c > 0.0)) throw Error("NonPositiveWeight", "combination weights must be positive");
        total += c;
    }
    if (total > 1.0 + 1e-12) throw Error("WeightSumExceedsOne", "combination weights sum above one");

    const auto& space = basis.space();
    std::vector<RestrictedMeasurement> out;
    for (std::size_t j = 0; j < families.size(); ++j) {
        const auto& family = families[j];
        if (!check_pure_measurement(basis, family, options).pass) {
            throw Error("ImpureComponent", "component family is not a rank-one projector");
        }
        for (const auto& member : family) {
            auto it = std::find_if(out.begin(), out.end(),
                                   [&](const RestrictedMeasurement& r) { return r.striation == member.striation; });
            if (it == out.end()) {
                RestrictedMeasurement blank;
                blank.striation = member.striation;
                blank.lines.assign(member.lines.size(), 0.0);
                blank.values.assign(member.values.size(), 0.0);
                out.push_back(std::move(blank));
                it = std::prev(out.end());
            }
            for (std::size_t c = 0; c < member.lines.size(); ++c) it->lines[c] += weights[j] * member.lines[c];
            for (std::size_t a = 0; a < member.values.size(); ++a) it->values[a] += weights[j] * member.values[a];
            it->trace_effect += weights[j] * member.trace_effect;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const RestrictedMeasurement& a, const RestrictedMeasurement& b) { return a.striation < b.striation; });
    for (auto& r : out) r.min_raw = *std::min_element(r.lines.begin(), r.lines.end());
    require_complete(space, std::span<const RestrictedMeasurement>(out));
    return out;
}

}  // namespace erps
