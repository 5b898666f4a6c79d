#pragma once

#include <span>
#include <vector>

#include "erps/operators.hpp"

namespace erps {

/// Wigner function Q(α|w), one value per phase point (point-index order).
struct StateQuasi {
    std::uint32_t dim = 0;
    std::vector<double> values;
};

/// Transition quasiprobabilities Q_E(β|α), stored row-major with β as row.
struct ChannelQuasi {
    std::uint32_t dim = 0;
    std::vector<double> values;

    std::size_t points() const { return static_cast<std::size_t>(dim) * dim; }
    double at(std::size_t beta, std::size_t alpha) const { return values[beta * points() + alpha]; }
};

/// Measurement function Q(E|α) = tr(E A_α).
struct MeasQuasi {
    std::uint32_t dim = 0;
    std::vector<double> values;
    double trace_effect = 0.0;
};

/// Imaginary parts above this are reported through the diagnostic sink.
inline constexpr double kImaginaryResidueTolerance = 1e-9;

StateQuasi wigner_of_state(const OperatorBasis& basis, const ComplexMatrix& w);
ComplexMatrix state_from_wigner(const OperatorBasis& basis, const StateQuasi& q);

ChannelQuasi quasi_of_channel(const OperatorBasis& basis, const Channel& channel);
/// Σ_β Q(β|α) A_β applied linearly: the operator-level channel action on ρ.
ComplexMatrix apply_channel_quasi(const OperatorBasis& basis, const ChannelQuasi& q, const ComplexMatrix& rho);

/// Choi matrix Σ_{k,l} |k⟩⟨l| ⊗ ℰ(|k⟩⟨l|) of the channel a quasi object describes.
ComplexMatrix choi_from_quasi(const OperatorBasis& basis, const ChannelQuasi& q);

MeasQuasi quasi_of_measurement(const OperatorBasis& basis, const ComplexMatrix& effect);
ComplexMatrix effect_from_quasi(const OperatorBasis& basis, const MeasQuasi& q);

/// Q'(β) = Σ_α Q_E(β|α) Q(α).
StateQuasi evolve(const ChannelQuasi& channel, const StateQuasi& state);
/// (second ∘ first) as a matrix product.
ChannelQuasi compose(const ChannelQuasi& first, const ChannelQuasi& second);

struct BornValue {
    double probability = 0.0;  ///< clamped to [0, 1]
    double raw = 0.0;
};

BornValue born_quasi(const MeasQuasi& effect, std::span<const ChannelQuasi> chain, const StateQuasi& state);

/// tr(E ℰ_n(…ℰ_1(w)…)) computed directly in Hilbert space.
double born_hilbert(const ComplexMatrix& w, std::span<const Channel> chain, const ComplexMatrix& effect);

}  // namespace erps
