#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "erps/field.hpp"

namespace erps {

/// A point (α_q, α_p) of the d × d phase space. α_q is the horizontal
/// (position) coordinate, α_p the vertical (momentum) coordinate.
struct PhasePoint {
    FieldElement q;
    FieldElement p;

    friend constexpr bool operator==(PhasePoint, PhasePoint) = default;
};

/// Slope label of a striation. Vertical lines carry the distinguished
/// infinite label instead of a field element.
struct Slope {
    bool infinite = false;
    FieldElement value{};

    static constexpr Slope finite(FieldElement m) { return {false, m}; }
    static constexpr Slope vertical() { return {true, {}}; }

    friend constexpr bool operator==(Slope, Slope) = default;
};

/// The line a·α_q + b·α_p = c.
struct Line {
    FieldElement a;
    FieldElement b;
    FieldElement c;
};

/// 2×2 matrix [[v, x], [y, z]] acting as (q, p) ↦ (v q + x p, y q + z p).
struct SymplecticMatrix {
    FieldElement v;
    FieldElement x;
    FieldElement y;
    FieldElement z;

    friend constexpr bool operator==(const SymplecticMatrix&, const SymplecticMatrix&) = default;
};

FieldElement determinant(const FiniteField& field, const SymplecticMatrix& s);
SymplecticMatrix multiply(const FiniteField& field, const SymplecticMatrix& lhs, const SymplecticMatrix& rhs);
SymplecticMatrix identity_symplectic(const FiniteField& field);
SymplecticMatrix inverse(const FiniteField& field, const SymplecticMatrix& s);
PhasePoint apply(const FiniteField& field, const SymplecticMatrix& s, PhasePoint point);

/// Symplectic form ⟨α, β⟩ = α_p β_q − α_q β_p.
FieldElement symplectic_product(const FiniteField& field, PhasePoint alpha, PhasePoint beta);

/// Phase space over a fixed field, with precomputed point and line tables.
///
/// Points are indexed q·d + p. Striation k < d has the finite slope
/// element(k) and consists of the lines α_p − m α_q = c; striation d is
/// vertical, with lines α_q = c. A line inside its striation is indexed by
/// the intercept c, so the line through the origin always has index 0.
class PhaseSpace {
public:
    explicit PhaseSpace(FiniteField field);

    const FiniteField& field() const { return field_; }
    std::uint32_t dim() const { return dim_; }
    std::size_t num_points() const { return static_cast<std::size_t>(dim_) * dim_; }
    std::size_t num_striations() const { return dim_ + 1U; }

    std::size_t index(PhasePoint point) const {
        return static_cast<std::size_t>(point.q.index) * dim_ + point.p.index;
    }
    PhasePoint point(std::size_t index) const {
        return {FieldElement{static_cast<std::uint32_t>(index / dim_)},
                FieldElement{static_cast<std::uint32_t>(index % dim_)}};
    }
    /// Index of α + β and of α − β.
    std::size_t add_index(std::size_t a, std::size_t b) const { return add_table_[a * num_points() + b]; }
    std::size_t sub_index(std::size_t a, std::size_t b) const { return sub_table_[a * num_points() + b]; }

    Slope slope(std::size_t striation) const;
    std::size_t striation_index(Slope slope) const;

    /// Intercept of the line of `striation` containing the point.
    std::size_t line_of(std::size_t striation, std::size_t point_index) const {
        return line_of_[striation * num_points() + point_index];
    }
    /// Point indices on line `intercept` of `striation`, in increasing order.
    std::span<const std::size_t> points_on(std::size_t striation, std::size_t intercept) const {
        const std::size_t offset = (striation * dim_ + intercept) * dim_;
        return {points_on_.data() + offset, dim_};
    }
    Line line(std::size_t striation, std::size_t intercept) const;

private:
    FiniteField field_;
    std::uint32_t dim_;
    std::vector<std::size_t> line_of_;
    std::vector<std::size_t> points_on_;
    std::vector<std::size_t> add_table_;
    std::vector<std::size_t> sub_table_;
};

/// Image of a striation under S, together with the induced map on intercepts.
struct StriationImage {
    std::size_t striation = 0;
    std::vector<std::size_t> intercept_map;
};

StriationImage apply_striation_image(const PhaseSpace& space, const SymplecticMatrix& s, std::size_t striation);

/// Point permutation α ↦ Sα as an index table.
std::vector<std::size_t> point_permutation(const PhaseSpace& space, const SymplecticMatrix& s);

/// Every determinant-one matrix, lexicographic in the indices of (v, x, y, z).
std::vector<SymplecticMatrix> symplectic_group(const FiniteField& field);

/// Symplectic matrices that admit a covariant unitary. For d = 2 this is
/// {I, R, L} in that order; for odd d it is the whole group.
std::vector<SymplecticMatrix> legal_symplectics(const FiniteField& field);

bool is_legal(const FiniteField& field, const SymplecticMatrix& s);

enum class FrameworkMode { FullGroup, Mrs };

std::uint32_t redundancy_factor(const FiniteField& field, FrameworkMode mode);

/// Σ_S [Sμ = ν] over the given set. Both points must be nonzero.
std::size_t symplectic_orbit_count(const FiniteField& field, PhasePoint mu, PhasePoint nu,
                                   std::span<const SymplecticMatrix> set);

struct MrsOptions {
    std::uint64_t node_budget = 100'000'000;
    /// Directory for the on-disk result cache; empty disables it.
    std::filesystem::path cache_dir;
};

struct MrsResult {
    bool found = false;
    /// True when the search stopped because the node budget ran out.
    bool budget_exhausted = false;
    std::uint64_t nodes = 0;
    std::vector<SymplecticMatrix> matrices;
};

/// Searches for d² − 1 legal symplectics whose pairwise differences are all
/// invertible. Deterministic; the identity is always the first element.
/// Found sets are cached in-process per field and, when configured, on disk.
MrsResult minimal_reconstructing_set(const FiniteField& field, const MrsOptions& options = {});

/// True iff `set` has d² − 1 legal elements with pairwise invertible differences.
bool verify_mrs(const FiniteField& field, std::span<const SymplecticMatrix> set);

/// Cache directory taken from ERPS_CACHE_DIR, or empty.
std::filesystem::path default_cache_dir();

/// (1/(Z d²)) Σ_{S,δ} [β = Sα + δ][β' = Sα' + δ] over the given set.
double transition_coincidence(const PhaseSpace& space, std::span<const SymplecticMatrix> set,
                              std::uint32_t redundancy, PhasePoint alpha, PhasePoint alpha2, PhasePoint beta,
                              PhasePoint beta2);

}  // namespace erps
