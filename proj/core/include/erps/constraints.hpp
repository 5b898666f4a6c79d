#pragma once

#include <span>
#include <string>
#include <vector>

#include "erps/restricted.hpp"

namespace erps {

/// Three-point structure function Γ_{αβγ} = (1/d) tr(A_α A_β A_γ) from its
/// closed form in terms of symplectic products. Odd d only.
Complex gamma(const OperatorBasis& basis, std::size_t alpha, std::size_t beta, std::size_t gamma);
/// The same quantity by direct matrix multiplication.
Complex gamma_direct(const OperatorBasis& basis, std::size_t alpha, std::size_t beta, std::size_t gamma);

struct ConstraintReport {
    std::string check;
    bool pass = false;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::uint64_t samples = 0;
};

struct ConstraintOptions {
    double tolerance = 1e-9;
    /// Primed triples checked for channel unitarity above `exhaustive_max_dim`.
    std::uint64_t samples = 10'000;
    std::uint64_t seed = 20'240'611;
    std::uint32_t exhaustive_max_dim = 3;
};

/// Purity of the state described by a complete restricted family.
ConstraintReport check_pure_state(const OperatorBasis& basis, std::span<const RestrictedState> family,
                                  const ConstraintOptions& options = {});
/// Unitarity of the channel described by a complete restricted family.
ConstraintReport check_unitary_channel(const OperatorBasis& basis, std::span<const RestrictedChannel> family,
                                       const ConstraintOptions& options = {});
/// Rank-one projector test for a POVM element's restricted family.
ConstraintReport check_pure_measurement(const OperatorBasis& basis, std::span<const RestrictedMeasurement> family,
                                        const ConstraintOptions& options = {});

/// R^B(E|α) = Σ_j c_j R^B(E_j|α) over families that each pass the pure test.
std::vector<RestrictedMeasurement> combine_povm_families(
    const OperatorBasis& basis, std::span<const std::vector<RestrictedMeasurement>> families,
    std::span<const double> weights, const ConstraintOptions& options = {});

}  // namespace erps
