#pragma once

#include <span>
#include <vector>

#include "erps/composite.hpp"
#include "erps/engine.hpp"

namespace erps::examples {

using Grid = std::vector<std::vector<double>>;

/// Unbalanced Mach-Zehnder interferometer: w = (√3/2)|0⟩ + (i/2)|1⟩,
/// beamsplitter (√3/2)I + (i/2)X, effect |0⟩⟨0|.
ComplexMatrix mach_zehnder_unitary();
ExperimentSpec mach_zehnder();

/// Two entangled qutrits as one F_9 system, basis vectors labelled a + bξ:
/// (|00⟩ + |01⟩ + |10⟩ + |11⟩)/(2√2) + |22⟩/√2.
FiniteField two_qutrit_field();
ComplexMatrix two_qutrit_state();

/// Picture layout for a prime field: top row has the largest p, columns run
/// over q in increasing order.
Grid phase_grid(const PhaseSpace& space, std::span<const double> values);

/// Picture layout with particle labels: rows are (α_p1 … α_pn) in decreasing
/// lexicographic order, columns (α_q1 … α_qn) in increasing order.
Grid particle_grid(const ParticleDecomposition& dec, const PhaseSpace& space, std::span<const double> values);

/// R^S(β|α) with β labelling rows, both in point-index order.
Grid transition_matrix(const PhaseSpace& space, const RestrictedChannel& channel);
Grid transition_matrix(const ChannelQuasi& channel);

}  // namespace erps::examples
