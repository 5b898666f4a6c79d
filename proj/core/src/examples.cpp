#include "erps/examples.hpp"

#include <cmath>

namespace erps::examples {

ComplexMatrix mach_zehnder_unitary() {
    const double c = std::sqrt(3.0) / 2.0;
    ComplexMatrix u(2, 2);
    u << c, Complex(0.0, 0.5), Complex(0.0, 0.5), c;
    return u;
}

ExperimentSpec mach_zehnder() {
    Eigen::VectorXcd w(2);
    w << std::sqrt(3.0) / 2.0, Complex(0.0, 0.5);
    ComplexMatrix effect = ComplexMatrix::Zero(2, 2);
    effect(0, 0) = 1.0;
    return {FiniteField::create(2, 1), w * w.adjoint(), {unitary_channel(mach_zehnder_unitary())}, effect};
}

FiniteField two_qutrit_field() { return FiniteField::create(3, 2, Polynomial{1, 0, 1}); }

ComplexMatrix two_qutrit_state() {
    const auto field = two_qutrit_field();
    const auto label = [&](int a, int b) { return field.add(field.from_int(a), field.mul(field.from_int(b), field.xi())).index; };
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(field.order());
    const double small = 1.0 / (2.0 * std::sqrt(2.0));
    psi(label(0, 0)) = small;
    psi(label(0, 1)) = small;
    psi(label(1, 0)) = small;
    psi(label(1, 1)) = small;
    psi(label(2, 2)) = 1.0 / std::sqrt(2.0);
    return psi * psi.adjoint();
}

Grid phase_grid(const PhaseSpace& space, std::span<const double> values) {
    const std::uint32_t d = space.dim();
    Grid grid(d, std::vector<double>(d));
    for (std::uint32_t row = 0; row < d; ++row) {
        for (std::uint32_t q = 0; q < d; ++q) {
            grid[row][q] = values[space.index({FieldElement{q}, FieldElement{d - 1 - row}})];
        }
    }
    return grid;
}

Grid particle_grid(const ParticleDecomposition& dec, const PhaseSpace& space, std::span<const double> values) {
    const std::uint32_t d = space.dim();
    const std::uint32_t r = dec.base().order();
    const std::uint32_t n = dec.particles();
    // Mixed-radix digits, most significant first.
    const auto digits = [&](std::uint32_t label) {
        std::vector<std::uint32_t> out(n);
        for (std::uint32_t j = n; j-- > 0;) {
            out[j] = label % r;
            label /= r;
        }
        return out;
    };
    Grid grid(d, std::vector<double>(d));
    for (std::uint32_t row = 0; row < d; ++row) {
        const auto p_digits = digits(d - 1 - row);
        for (std::uint32_t col = 0; col < d; ++col) {
            const auto q_digits = digits(col);
            std::vector<PhasePoint> coords(n);
            for (std::uint32_t j = 0; j < n; ++j) coords[j] = {FieldElement{q_digits[j]}, FieldElement{p_digits[j]}};
            grid[row][col] = values[space.index(dec.from_particle_coords(coords))];
        }
    }
    return grid;
}

Grid transition_matrix(const PhaseSpace& space, const RestrictedChannel& channel) {
    const std::size_t n = space.num_points();
    Grid grid(n, std::vector<double>(n));
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t a = 0; a < n; ++a) grid[b][a] = channel.conditional(space, b, a);
    }
    return grid;
}

Grid transition_matrix(const ChannelQuasi& channel) {
    const std::size_t n = channel.points();
    Grid grid(n, std::vector<double>(n));
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t a = 0; a < n; ++a) grid[b][a] = channel.at(b, a);
    }
    return grid;
}

}  // namespace erps::examples
