#pragma once

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "erps/engine.hpp"
#include "erps/random.hpp"

namespace erps::testing {

inline double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    EXPECT_EQ(a.size(), b.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    return worst;
}

/// Flattens a grid given in picture layout (top row = largest p, columns by q)
/// into point-index order for a prime field.
inline std::vector<double> from_picture(const std::vector<std::vector<double>>& rows, double scale = 1.0) {
    const std::size_t d = rows.size();
    std::vector<double> out(d * d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t q = 0; q < d; ++q) out[q * d + (d - 1 - r)] = rows[r][q] * scale;
    }
    return out;
}

inline std::vector<double> flatten(const std::vector<std::vector<double>>& rows, double scale = 1.0) {
    std::vector<double> out;
    for (const auto& row : rows) {
        for (double v : row) out.push_back(v * scale);
    }
    return out;
}

/// tr(E ℰ_n(…ℰ_1(w)…)) with the Kraus sums written out.
inline double born_direct(const ComplexMatrix& w, const std::vector<Channel>& chain, const ComplexMatrix& effect) {
    ComplexMatrix rho = w;
    for (const auto& channel : chain) {
        ComplexMatrix next = ComplexMatrix::Zero(rho.rows(), rho.cols());
        for (const auto& k : channel.kraus) next += k * rho * k.adjoint();
        rho = next;
    }
    return (effect * rho).trace().real();
}

inline ExperimentSpec random_spec(RandomSource& rng, const FiniteField& field, std::size_t n_channels) {
    const std::uint32_t d = field.order();
    ExperimentSpec spec{field, rng.mixed_state(d), {}, rng.effect(d)};
    for (std::size_t k = 0; k < n_channels; ++k) spec.channels.push_back(rng.unital_channel(d));
    return spec;
}

}  // namespace erps::testing
