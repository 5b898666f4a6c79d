#pragma once

#include <cstdint>
#include <random>

#include "erps/operators.hpp"

namespace erps {

/// Seeded generators for test and benchmark inputs.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    /// Haar-distributed unitary (QR of a complex Ginibre matrix).
    ComplexMatrix unitary(std::size_t dim);
    Eigen::VectorXcd ket(std::size_t dim);
    ComplexMatrix pure_state(std::size_t dim);
    /// Full-rank mixed state G G† / tr(G G†).
    ComplexMatrix mixed_state(std::size_t dim);
    /// Random mixture of `terms` unitaries; always unital.
    Channel unital_channel(std::size_t dim, std::size_t terms = 3);
    /// U diag(λ) U† with λ uniform in [0, 1].
    ComplexMatrix effect(std::size_t dim);

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    std::size_t index(std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(engine_); }
    std::mt19937_64& engine() { return engine_; }

private:
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    ComplexMatrix ginibre(std::size_t dim);

    std::mt19937_64 engine_;
};

}  // namespace erps
