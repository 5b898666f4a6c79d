#pragma once

#include <optional>
#include <span>
#include <vector>

#include "erps/restricted.hpp"

namespace erps {

/// Splits F_d = F_{r^n} into n particles with single-particle field F_r.
/// The horizontal coordinate is expanded in `q_basis`, the vertical one in
/// its trace-dual `p_basis`. Particle 1 is the one kept by partial traces.
class ParticleDecomposition {
public:
    /// `sub_degree` is s with r = p^s. Defaults to the polynomial basis.
    ParticleDecomposition(FiniteField field, std::uint32_t sub_degree = 1,
                          std::optional<std::vector<FieldElement>> q_basis = std::nullopt);

    const FiniteField& field() const { return field_; }
    /// Stand-alone F_r, embedded into F_d through embed().
    const FiniteField& base() const { return base_; }
    std::uint32_t particles() const { return particles_; }
    const FieldBasis& q_basis() const { return q_basis_; }
    const FieldBasis& p_basis() const { return p_basis_; }

    FieldElement embed(FieldElement small) const { return embed_[small.index]; }
    /// Inverse of embed(); throws NotASubfield for elements outside F_r.
    FieldElement restrict_to_base(FieldElement large) const;

    /// Per-particle points (α_{q j}, α_{p j}) over F_r.
    std::vector<PhasePoint> particle_coords(PhasePoint alpha) const;
    PhasePoint from_particle_coords(std::span<const PhasePoint> coords) const;
    /// Index of particle 1's point in the F_r phase space, per large-space point.
    std::size_t first_particle_point(std::size_t large_point) const { return first_point_[large_point]; }

    /// Position in the Kronecker product basis |k_1⟩⊗…⊗|k_n⟩ of the
    /// computational basis vector labelled by a field element.
    std::size_t kronecker_index(FieldElement k) const { return kron_[k.index]; }

    /// Moves particle `j` (zero-based) to the front of the basis.
    static std::vector<FieldElement> basis_with_particle_first(std::span<const FieldElement> basis, std::size_t j);

private:
    FiniteField field_;
    FiniteField base_;
    std::uint32_t particles_;
    FieldBasis q_basis_;
    FieldBasis p_basis_;
    std::vector<FieldElement> embed_;
    std::vector<std::int64_t> unembed_;
    std::vector<std::size_t> first_point_;
    std::vector<std::size_t> kron_;
};

/// Max over α of |A_α − A_{α_1} ⊗ … ⊗ A_{α_n}| in the Kronecker basis.
double factorization_check(const ParticleDecomposition& dec);

struct SlopeClass {
    enum class Kind { MapsToSlope, InfiniteSlope, UniformCovering };
    Kind kind = Kind::UniformCovering;
    /// Striation index in the particle phase space (slope m_1, or r for infinite).
    std::size_t base_striation = 0;
    /// Expansion coefficients m_j of e_1 m in the dual basis (finite slopes only).
    std::vector<FieldElement> coefficients;
};

SlopeClass classify_slope(const ParticleDecomposition& dec, const PhaseSpace& space, std::size_t striation);

/// Σ over the other particles' coordinates of a per-point function.
std::vector<double> sum_to_first_particle(const ParticleDecomposition& dec, std::span<const double> values);

StateQuasi partial_trace_wigner(const ParticleDecomposition& dec, const StateQuasi& q);

/// Particle-1 restricted family, one entry per particle striation in order.
std::vector<RestrictedState> partial_trace_restricted(const ParticleDecomposition& dec, const PhaseSpace& space,
                                                      std::span<const RestrictedState> family);

/// tr_{2…n} w, with w given in the field-labelled computational basis.
ComplexMatrix partial_trace_density(const ParticleDecomposition& dec, const ComplexMatrix& w);

}  // namespace erps
