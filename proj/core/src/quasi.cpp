#include "erps/quasi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "erps/error.hpp"

namespace erps {

namespace {

// tr(A M) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& m) {
    return a.cwiseProduct(m.transpose()).sum();
}

double real_part(Complex value, const char* what) {
    if (std::abs(value.imag()) > kImaginaryResidueTolerance) {
        std::ostringstream os;
        os << what << ": imaginary residue " << value.imag() << " exceeds tolerance";
        emit_diagnostic(os.str());
    }
    return value.real();
}

void require_dim(const OperatorBasis& basis, const ComplexMatrix& m, const char* code) {
    if (m.rows() != basis.dim() || m.cols() != basis.dim()) {
        throw Error(code, "matrix dimension does not match the field order");
    }
}

}  // namespace

StateQuasi wigner_of_state(const OperatorBasis& basis, const ComplexMatrix& w) {
    require_dim(basis, w, "InvalidState");
    if (auto report = validate_state(w); !report.valid()) throw Error("InvalidState", report.summary());
    StateQuasi q{basis.dim(), std::vector<double>(basis.num_points())};
    const double inv_d = 1.0 / basis.dim();
    for (std::size_t a = 0; a < basis.num_points(); ++a) {
        q.values[a] = inv_d * real_part(trace_product(basis.a(a), w), "wigner_of_state");
    }
    return q;
}

ComplexMatrix state_from_wigner(const OperatorBasis& basis, const StateQuasi& q) {
    if (q.values.size() != basis.num_points()) throw Error("DimensionMismatch", "Wigner function has wrong size");
    ComplexMatrix w = ComplexMatrix::Zero(basis.dim(), basis.dim());
    for (std::size_t a = 0; a < basis.num_points(); ++a) w += q.values[a] * basis.a(a);
    return w;
}

ChannelQuasi quasi_of_channel(const OperatorBasis& basis, const Channel& channel) {
    auto report = validate_channel(channel, basis.dim());
    if (!report.valid()) {
        const bool only_unital = report.violations.size() == 1 && report.violations.front().condition == "unital";
        throw Error(only_unital ? "NonUnitalChannel" : "InvalidChannel", report.summary());
    }
    const std::size_t n = basis.num_points();
    ChannelQuasi q{basis.dim(), std::vector<double>(n * n)};
    const double inv_d = 1.0 / basis.dim();
    for (std::size_t a = 0; a < n; ++a) {
        const ComplexMatrix image = apply_channel(channel, basis.a(a));
        for (std::size_t b = 0; b < n; ++b) {
            q.values[b * n + a] = inv_d * real_part(trace_product(basis.a(b), image), "quasi_of_channel");
        }
    }
    return q;
}

ComplexMatrix apply_channel_quasi(const OperatorBasis& basis, const ChannelQuasi& q, const ComplexMatrix& rho) {
    const auto wigner = [&] {
        StateQuasi s{basis.dim(), std::vector<double>(basis.num_points())};
        for (std::size_t a = 0; a < basis.num_points(); ++a) {
            s.values[a] = real_part(trace_product(basis.a(a), rho), "apply_channel_quasi") / basis.dim();
        }
        return s;
    }();
    return state_from_wigner(basis, evolve(q, wigner));
}

ComplexMatrix choi_from_quasi(const OperatorBasis& basis, const ChannelQuasi& q) {
    if (q.values.size() != basis.num_points() * basis.num_points()) {
        throw Error("DimensionMismatch", "transition quasiprobabilities have wrong size");
    }
    const auto n = static_cast<Eigen::Index>(basis.num_points());
    ComplexMatrix choi = ComplexMatrix::Zero(n, n);
    for (std::size_t a = 0; a < basis.num_points(); ++a) {
        ComplexMatrix image = ComplexMatrix::Zero(basis.dim(), basis.dim());
        for (std::size_t b = 0; b < basis.num_points(); ++b) image += q.at(b, a) * basis.a(b);
        choi += Eigen::kroneckerProduct(basis.a(a).transpose(), image).eval();
    }
    return choi / static_cast<double>(basis.dim());
}

MeasQuasi quasi_of_measurement(const OperatorBasis& basis, const ComplexMatrix& effect) {
    require_dim(basis, effect, "InvalidPovmElement");
    if (auto report = validate_effect(effect); !report.valid()) {
        throw Error("InvalidPovmElement", report.summary());
    }
    MeasQuasi q{basis.dim(), std::vector<double>(basis.num_points()), effect.trace().real()};
    for (std::size_t a = 0; a < basis.num_points(); ++a) {
        q.values[a] = real_part(trace_product(effect, basis.a(a)), "quasi_of_measurement");
    }
    return q;
}

ComplexMatrix effect_from_quasi(const OperatorBasis& basis, const MeasQuasi& q) {
    if (q.values.size() != basis.num_points()) throw Error("DimensionMismatch", "measurement function has wrong size");
    ComplexMatrix e = ComplexMatrix::Zero(basis.dim(), basis.dim());
    for (std::size_t a = 0; a < basis.num_points(); ++a) e += q.values[a] * basis.a(a);
    return e / static_cast<double>(basis.dim());
}

StateQuasi evolve(const ChannelQuasi& channel, const StateQuasi& state) {
    const std::size_t n = channel.points();
    if (state.values.size() != n) throw Error("DimensionMismatch", "state and channel dimensions differ");
    StateQuasi out{state.dim, std::vector<double>(n, 0.0)};
    for (std::size_t b = 0; b < n; ++b) {
        double sum = 0.0;
        for (std::size_t a = 0; a < n; ++a) sum += channel.values[b * n + a] * state.values[a];
        out.values[b] = sum;
    }
    return out;
}

ChannelQuasi compose(const ChannelQuasi& first, const ChannelQuasi& second) {
    const std::size_t n = first.points();
    if (second.points() != n) throw Error("DimensionMismatch", "channel dimensions differ");
    ChannelQuasi out{first.dim, std::vector<double>(n * n, 0.0)};
    for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t b = 0; b < n; ++b) {
            const double s = second.values[g * n + b];
            if (s == 0.0) continue;
            for (std::size_t a = 0; a < n; ++a) out.values[g * n + a] += s * first.values[b * n + a];
        }
    }
    return out;
}

BornValue born_quasi(const MeasQuasi& effect, std::span<const ChannelQuasi> chain, const StateQuasi& state) {
    StateQuasi current = state;
    for (const auto& ch : chain) current = evolve(ch, current);
    if (effect.values.size() != current.values.size()) {
        throw Error("DimensionMismatch", "effect and state dimensions differ");
    }
    double raw = 0.0;
    for (std::size_t a = 0; a < current.values.size(); ++a) raw += effect.values[a] * current.values[a];
    return {std::clamp(raw, 0.0, 1.0), raw};
}

double born_hilbert(const ComplexMatrix& w, std::span<const Channel> chain, const ComplexMatrix& effect) {
    ComplexMatrix rho = w;
    for (const auto& ch : chain) rho = apply_channel(ch, rho);
    return trace_product(effect, rho).real();
}

}  // namespace erps
