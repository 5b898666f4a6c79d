#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "erps/phase_space.hpp"

namespace erps {

using Complex = std::complex<double>;
/// Square complex matrix; row and column indices are field-element indices.
using ComplexMatrix = Eigen::MatrixXcd;

struct Channel {
    std::vector<ComplexMatrix> kraus;
};

ComplexMatrix apply_channel(const Channel& channel, const ComplexMatrix& rho);
/// Kraus operators of `second ∘ first`.
Channel compose(const Channel& first, const Channel& second);
Channel unitary_channel(const ComplexMatrix& unitary);

struct Tolerances {
    double validity = 1e-9;
    double identity = 1e-12;
};

/// Phase space together with its phase-point operators and the phase
/// table for ω = exp(2πi/p). Built once per field and shared read-only.
class OperatorBasis {
public:
    explicit OperatorBasis(FiniteField field);

    const PhaseSpace& space() const { return space_; }
    const FiniteField& field() const { return space_.field(); }
    std::uint32_t dim() const { return space_.dim(); }
    std::size_t num_points() const { return space_.num_points(); }

    /// A_α for the point with the given index.
    const ComplexMatrix& a(std::size_t point) const { return a_[point]; }

    /// ω^k for k in Z_p (for d = 2, (−1)^k).
    Complex omega(std::uint32_t k) const { return omega_[k % omega_.size()]; }
    /// ω^{Tr(x)}.
    Complex omega_tr(FieldElement x) const { return omega_[field().trace(x)]; }

private:
    PhaseSpace space_;
    std::vector<Complex> omega_;
    std::vector<ComplexMatrix> a_;
};

using OperatorBasisPtr = std::shared_ptr<const OperatorBasis>;

/// Shared, lazily built basis for the field.
OperatorBasisPtr operator_basis(const FiniteField& field);

ComplexMatrix phase_point_operator(const OperatorBasis& basis, PhasePoint alpha);
ComplexMatrix displacement_operator(const OperatorBasis& basis, PhasePoint delta);
/// Unitary U_S with U_S A_α U_S† = A_{Sα}, up to a global phase.
ComplexMatrix symplectic_unitary(const OperatorBasis& basis, const SymplecticMatrix& s);
/// (1/d) Σ_δ ω^{Tr⟨α,δ⟩} D_δ. Odd d only.
ComplexMatrix a_from_displacements(const OperatorBasis& basis, PhasePoint alpha);

enum class ObjectKind { State, Channel, PovmElement, Unitary };

std::string to_string(ObjectKind kind);

struct Violation {
    std::string condition;
    double magnitude = 0.0;
};

struct ValidationReport {
    ObjectKind kind = ObjectKind::State;
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate_state(const ComplexMatrix& w, double tol = Tolerances{}.validity);
ValidationReport validate_channel(const Channel& channel, std::size_t dim, double tol = Tolerances{}.validity);
ValidationReport validate_effect(const ComplexMatrix& e, double tol = Tolerances{}.validity);
ValidationReport validate_unitary(const ComplexMatrix& u, double tol = Tolerances{}.validity);

/// Max entrywise |Σ_γ A_γ M A_γ − d tr(M) I|.
double sandwich_identity_check(const OperatorBasis& basis, const ComplexMatrix& m);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Projector onto the line state: (1/d) Σ_{α∈ℓ} A_α.
ComplexMatrix line_projector(const OperatorBasis& basis, std::size_t striation, std::size_t intercept);

}  // namespace erps
