#include "erps/restricted.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "erps/error.hpp"

namespace erps {

namespace {

// Clamps round-off negatives in place and returns the raw minimum.
double clamp_nonnegative(std::vector<double>& values, const char* code, const char* what) {
    double min_raw = values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
    if (min_raw < -kClampTolerance) {
        std::ostringstream os;
        os << what << " has negative entry " << min_raw;
        throw Error(code, os.str());
    }
    if (min_raw < 0.0) {
        std::ostringstream os;
        os << what << ": clamped round-off negative " << min_raw;
        emit_diagnostic(os.str());
        for (auto& v : values) v = std::max(v, 0.0);
    }
    return min_raw;
}

void check_points(const PhaseSpace& space, std::size_t size, const char* code) {
    if (size != space.num_points()) throw Error(code, "value array does not match the phase-space size");
}

void check_striation(const PhaseSpace& space, std::size_t striation) {
    if (striation >= space.num_striations()) throw Error("InvalidStriation", "striation index out of range");
}

std::vector<double> spread_over_lines(const PhaseSpace& space, std::size_t striation, const std::vector<double>& lines,
                                      double scale) {
    std::vector<double> values(space.num_points());
    for (std::size_t a = 0; a < values.size(); ++a) values[a] = scale * lines[space.line_of(striation, a)];
    return values;
}

bool constant_on_lines(const PhaseSpace& space, std::size_t striation, std::span<const double> values, double tol) {
    for (std::size_t c = 0; c < space.dim(); ++c) {
        const auto pts = space.points_on(striation, c);
        for (auto pt : pts) {
            if (std::abs(values[pt] - values[pts.front()]) > tol) return false;
        }
    }
    return true;
}

template <typename T>
void check_family_cover(const PhaseSpace& space, std::span<const T> family, const char* code) {
    if (family.size() != space.num_striations()) {
        throw Error(code, "family must contain exactly one member per striation");
    }
    std::vector<bool> seen(space.num_striations(), false);
    for (const auto& member : family) {
        check_striation(space, member.striation);
        if (seen[member.striation]) throw Error(code, "family contains a striation twice");
        seen[member.striation] = true;
        check_points(space, member.values.size(), code);
    }
}

}  // namespace

double RestrictedChannel::conditional(const PhaseSpace& space, std::size_t beta, std::size_t alpha) const {
    const auto image = space.index(apply(space.field(), symplectic, space.point(alpha)));
    return class_dist[space.sub_index(beta, image)];
}

std::vector<double> marginal(const PhaseSpace& space, const StateQuasi& q, std::size_t striation) {
    check_points(space, q.values.size(), "DimensionMismatch");
    check_striation(space, striation);
    std::vector<double> lines(space.dim(), 0.0);
    for (std::size_t c = 0; c < space.dim(); ++c) {
        for (auto pt : space.points_on(striation, c)) lines[c] += q.values[pt];
    }
    return lines;
}

RestrictedState restrict_state(const PhaseSpace& space, const StateQuasi& q, std::size_t striation) {
    RestrictedState r;
    r.striation = striation;
    r.lines = marginal(space, q, striation);
    r.min_raw = clamp_nonnegative(r.lines, "NegativeMarginal", "line marginal");
    r.values = spread_over_lines(space, striation, r.lines, 1.0 / space.dim());
    return r;
}

RestrictedChannel restrict_channel(const PhaseSpace& space, const ChannelQuasi& q, const SymplecticMatrix& s) {
    if (q.points() != space.num_points()) throw Error("DimensionMismatch", "channel does not match phase space");
    if (!is_legal(space.field(), s)) throw Error("IllegalSymplectic", "restriction requires a legal symplectic");
    const std::size_t n = space.num_points();
    const auto perm = point_permutation(space, s);
    RestrictedChannel r;
    r.symplectic = s;
    r.class_dist.assign(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t delta = 0; delta < n; ++delta) {
            r.class_dist[delta] += q.at(space.add_index(perm[a], delta), a);
        }
    }
    for (auto& v : r.class_dist) v /= static_cast<double>(n);
    r.min_raw = clamp_nonnegative(r.class_dist, "NegativeClassProbability", "displacement-class distribution");
    return r;
}

RestrictedMeasurement restrict_measurement(const PhaseSpace& space, const MeasQuasi& q, std::size_t striation) {
    check_points(space, q.values.size(), "DimensionMismatch");
    check_striation(space, striation);
    RestrictedMeasurement r;
    r.striation = striation;
    r.trace_effect = q.trace_effect;
    r.lines.assign(space.dim(), 0.0);
    for (std::size_t c = 0; c < space.dim(); ++c) {
        for (auto pt : space.points_on(striation, c)) r.lines[c] += q.values[pt];
        r.lines[c] /= static_cast<double>(space.dim());
    }
    r.min_raw = clamp_nonnegative(r.lines, "OutOfRangeConditional", "conditional outcome probability");
    const double max_raw = *std::max_element(r.lines.begin(), r.lines.end());
    if (max_raw > 1.0 + kClampTolerance) {
        std::ostringstream os;
        os << "conditional outcome probability " << max_raw << " exceeds one";
        throw Error("OutOfRangeConditional", os.str());
    }
    for (auto& v : r.lines) v = std::min(v, 1.0);
    r.values = spread_over_lines(space, striation, r.lines, 1.0);
    return r;
}

std::vector<RestrictedState> restrict_state_all(const PhaseSpace& space, const StateQuasi& q) {
    std::vector<RestrictedState> out;
    for (std::size_t b = 0; b < space.num_striations(); ++b) out.push_back(restrict_state(space, q, b));
    return out;
}

std::vector<RestrictedChannel> restrict_channel_all(const PhaseSpace& space, const ChannelQuasi& q,
                                                    std::span<const SymplecticMatrix> set) {
    std::vector<RestrictedChannel> out;
    out.reserve(set.size());
    for (const auto& s : set) out.push_back(restrict_channel(space, q, s));
    return out;
}

std::vector<RestrictedMeasurement> restrict_measurement_all(const PhaseSpace& space, const MeasQuasi& q) {
    std::vector<RestrictedMeasurement> out;
    for (std::size_t b = 0; b < space.num_striations(); ++b) out.push_back(restrict_measurement(space, q, b));
    return out;
}

namespace {

void shift(std::vector<double>& values, double offset) {
    for (auto& v : values) v -= offset;
}

double inv_square(std::uint32_t d) { return 1.0 / (static_cast<double>(d) * d); }

}  // namespace

StateQuasi nonrandom(const StateQuasi& q) {
    auto out = q;
    shift(out.values, inv_square(q.dim));
    return out;
}

ChannelQuasi nonrandom(const ChannelQuasi& q) {
    auto out = q;
    shift(out.values, inv_square(q.dim));
    return out;
}

MeasQuasi nonrandom(const MeasQuasi& q) {
    auto out = q;
    shift(out.values, q.trace_effect / q.dim);
    return out;
}

RestrictedState nonrandom(const RestrictedState& r) {
    auto out = r;
    const auto d = static_cast<std::uint32_t>(r.lines.size());
    shift(out.lines, 1.0 / d);
    shift(out.values, inv_square(d));
    return out;
}

RestrictedChannel nonrandom(const RestrictedChannel& r) {
    auto out = r;
    shift(out.class_dist, 1.0 / static_cast<double>(r.class_dist.size()));
    return out;
}

RestrictedMeasurement nonrandom(const RestrictedMeasurement& r) {
    auto out = r;
    const double offset = r.trace_effect / static_cast<double>(r.lines.size());
    shift(out.lines, offset);
    shift(out.values, offset);
    return out;
}

StateQuasi reconstruct_state(const PhaseSpace& space, std::span<const RestrictedState> family) {
    check_family_cover(space, family, "InconsistentMarginals");
    const std::uint32_t d = space.dim();
    StateQuasi q{d, std::vector<double>(space.num_points(), 0.0)};
    for (const auto& r : family) {
        double total = 0.0;
        for (auto v : r.values) {
            if (v < -kClampTolerance) throw Error("InconsistentMarginals", "restricted state has a negative entry");
            total += v;
        }
        if (std::abs(total - 1.0) > kClampTolerance) {
            throw Error("InconsistentMarginals", "restricted state is not normalized");
        }
        if (!constant_on_lines(space, r.striation, r.values, kClampTolerance)) {
            throw Error("InconsistentMarginals", "restricted state is not constant on the lines of its striation");
        }
        for (std::size_t a = 0; a < q.values.size(); ++a) q.values[a] += r.values[a];
    }
    // Σ_B ΔR^B = ΔQ, i.e. Q = Σ_B R^B − 1/d.
    shift(q.values, 1.0 / d);
    return q;
}

std::uint32_t certified_redundancy(const FiniteField& field, std::span<const SymplecticMatrix> set) {
    const auto legal = legal_symplectics(field);
    if (set.size() == legal.size()) {
        std::vector<bool> used(legal.size(), false);
        bool complete = true;
        for (const auto& s : set) {
            auto it = std::find(legal.begin(), legal.end(), s);
            const auto k = static_cast<std::size_t>(it - legal.begin());
            if (it == legal.end() || used[k]) {
                complete = false;
                break;
            }
            used[k] = true;
        }
        if (complete) return redundancy_factor(field, FrameworkMode::FullGroup);
    }
    if (verify_mrs(field, set)) return 1;
    throw Error("IncompleteFrameworkSet",
                "symplectic set is neither the complete legal set nor a certified minimal reconstructing set");
}

ChannelQuasi reconstruct_channel(const PhaseSpace& space, std::span<const RestrictedChannel> family) {
    std::vector<SymplecticMatrix> set;
    for (const auto& r : family) {
        if (r.class_dist.size() != space.num_points()) {
            throw Error("InconsistentClassDistribution", "class distribution has wrong size");
        }
        double total = 0.0;
        for (auto v : r.class_dist) {
            if (v < -kClampTolerance) throw Error("InconsistentClassDistribution", "negative class probability");
            total += v;
        }
        if (std::abs(total - 1.0) > kClampTolerance) {
            throw Error("InconsistentClassDistribution", "class distribution is not normalized");
        }
        set.push_back(r.symplectic);
    }
    const std::uint32_t z = certified_redundancy(space.field(), set);
    const std::size_t n = space.num_points();
    ChannelQuasi q{space.dim(), std::vector<double>(n * n, 0.0)};
    for (const auto& r : family) {
        const auto perm = point_permutation(space, r.symplectic);
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t a = 0; a < n; ++a) q.values[b * n + a] += r.class_dist[space.sub_index(b, perm[a])];
        }
    }
    // ΔQ = (1/Z) Σ_S ΔR^S.
    const double inv_n = 1.0 / static_cast<double>(n);
    const double offset = static_cast<double>(family.size()) * inv_n / z - inv_n;
    for (auto& v : q.values) v = v / z - offset;
    return q;
}

MeasQuasi reconstruct_measurement(const PhaseSpace& space, std::span<const RestrictedMeasurement> family) {
    check_family_cover(space, family, "InconsistentConditionals");
    const double trace = family.front().trace_effect;
    MeasQuasi q{space.dim(), std::vector<double>(space.num_points(), 0.0), trace};
    for (const auto& r : family) {
        if (std::abs(r.trace_effect - trace) > kClampTolerance) {
            throw Error("InconsistentConditionals", "family members disagree on tr E");
        }
        double total = 0.0;
        for (auto v : r.values) {
            if (v < -kClampTolerance || v > 1.0 + kClampTolerance) {
                throw Error("InconsistentConditionals", "conditional probability outside [0, 1]");
            }
            total += v;
        }
        if (std::abs(total / space.dim() - trace) > 1e-8) {
            throw Error("InconsistentConditionals", "conditional probabilities do not sum to d tr E");
        }
        if (!constant_on_lines(space, r.striation, r.values, kClampTolerance)) {
            throw Error("InconsistentConditionals", "conditional is not constant on the lines of its striation");
        }
        for (std::size_t a = 0; a < q.values.size(); ++a) q.values[a] += r.values[a];
    }
    // Σ_B ΔR^B(E) = ΔQ(E), i.e. Q(E) = Σ_B R^B(E) − tr E.
    shift(q.values, trace);
    return q;
}

std::vector<double> simulate_process_tomography(const OperatorBasis& basis, const Channel& channel,
                                                const SymplecticMatrix& s) {
    const auto d = static_cast<Eigen::Index>(basis.dim());
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(d * d);
    for (Eigen::Index m = 0; m < d; ++m) phi(m * d + m) = inv_sqrt_d;

    // ρ = Σ_j (I ⊗ B_j) |Φ⟩⟨Φ| (I ⊗ B_j)†.
    ComplexMatrix rho = ComplexMatrix::Zero(d * d, d * d);
    for (const auto& b : channel.kraus) {
        const ComplexMatrix lifted = Eigen::kroneckerProduct(ComplexMatrix::Identity(d, d), b);
        const Eigen::VectorXcd out = lifted * phi;
        rho.noalias() += out * out.adjoint();
    }

    const ComplexMatrix u = symplectic_unitary(basis, s);
    const auto& space = basis.space();
    std::vector<double> probs(space.num_points());
    for (std::size_t delta = 0; delta < probs.size(); ++delta) {
        const ComplexMatrix v = displacement_operator(basis, space.point(delta)) * u;
        Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(d * d);
        for (Eigen::Index m = 0; m < d; ++m) ket.segment(m * d, d) = inv_sqrt_d * v.col(m);
        probs[delta] = (ket.adjoint() * rho * ket)(0, 0).real();
    }
    return probs;
}

}  // namespace erps
