#pragma once

#include <span>
#include <vector>

#include "erps/quasi.hpp"

namespace erps {

/// Values at or above −kClampTolerance are treated as round-off and clamped to
/// zero; anything lower is an error.
inline constexpr double kClampTolerance = 1e-9;

/// R^B(α|w) = P^B(ℓ ∋ α)/d, constant on the lines of one striation.
struct RestrictedState {
    std::size_t striation = 0;
    std::vector<double> lines;   ///< P^B(ℓ), indexed by intercept
    std::vector<double> values;  ///< R^B(α), indexed by point
    double min_raw = 0.0;        ///< smallest line probability before clamping
};

/// Class distribution P^S(δ) of a channel; R^S(β|α) = P^S(β − Sα).
struct RestrictedChannel {
    SymplecticMatrix symplectic{};
    std::vector<double> class_dist;  ///< indexed by displacement point index
    double min_raw = 0.0;

    double conditional(const PhaseSpace& space, std::size_t beta, std::size_t alpha) const;
};

/// R^B(E|α) = P(E|ℓ ∋ α), constant on the lines of one striation.
struct RestrictedMeasurement {
    std::size_t striation = 0;
    std::vector<double> lines;   ///< P(E|ℓ), indexed by intercept
    std::vector<double> values;  ///< R^B(E|α), indexed by point
    double trace_effect = 0.0;
    double min_raw = 0.0;
};

/// P^B(ℓ) = Σ_{α∈ℓ} Q(α|w).
std::vector<double> marginal(const PhaseSpace& space, const StateQuasi& q, std::size_t striation);

RestrictedState restrict_state(const PhaseSpace& space, const StateQuasi& q, std::size_t striation);
RestrictedChannel restrict_channel(const PhaseSpace& space, const ChannelQuasi& q, const SymplecticMatrix& s);
RestrictedMeasurement restrict_measurement(const PhaseSpace& space, const MeasQuasi& q, std::size_t striation);

std::vector<RestrictedState> restrict_state_all(const PhaseSpace& space, const StateQuasi& q);
std::vector<RestrictedChannel> restrict_channel_all(const PhaseSpace& space, const ChannelQuasi& q,
                                                    std::span<const SymplecticMatrix> set);
std::vector<RestrictedMeasurement> restrict_measurement_all(const PhaseSpace& space, const MeasQuasi& q);

/// Nonrandom parts: the same object shifted by its completely-random value.
StateQuasi nonrandom(const StateQuasi& q);
ChannelQuasi nonrandom(const ChannelQuasi& q);
MeasQuasi nonrandom(const MeasQuasi& q);
RestrictedState nonrandom(const RestrictedState& r);
RestrictedChannel nonrandom(const RestrictedChannel& r);
RestrictedMeasurement nonrandom(const RestrictedMeasurement& r);

StateQuasi reconstruct_state(const PhaseSpace& space, std::span<const RestrictedState> family);
/// The symplectic set must be the full legal set or a certified minimal
/// reconstructing set; Z is derived from which one it is.
ChannelQuasi reconstruct_channel(const PhaseSpace& space, std::span<const RestrictedChannel> family);
MeasQuasi reconstruct_measurement(const PhaseSpace& space, std::span<const RestrictedMeasurement> family);

/// Redundancy factor implied by a symplectic set; throws
/// IncompleteFrameworkSet when the set is neither the legal set nor an MRS.
std::uint32_t certified_redundancy(const FiniteField& field, std::span<const SymplecticMatrix> set);

/// Outcome probabilities of ancilla-assisted process tomography: the channel
/// acts on half of a maximally entangled pair, which is then measured in the
/// basis (1/√d) Σ_m |m⟩ ⊗ D_δ U_S |m⟩. Indexed by displacement point index.
std::vector<double> simulate_process_tomography(const OperatorBasis& basis, const Channel& channel,
                                                const SymplecticMatrix& s);

}  // namespace erps
