#include "erps/operators.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "erps/error.hpp"

namespace erps {

ComplexMatrix apply_channel(const Channel& channel, const ComplexMatrix& rho) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& b : channel.kraus) out.noalias() += b * rho * b.adjoint();
    return out;
}

Channel compose(const Channel& first, const Channel& second) {
    Channel out;
    for (const auto& b2 : second.kraus) {
        for (const auto& b1 : first.kraus) out.kraus.emplace_back(b2 * b1);
    }
    return out;
}

Channel unitary_channel(const ComplexMatrix& unitary) { return Channel{{unitary}}; }

namespace {

ComplexMatrix qubit_a(std::uint32_t q, std::uint32_t p) {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    ComplexMatrix y(2, 2);
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    ComplexMatrix z(2, 2);
    z << 1, 0, 0, -1;
    const double sx = p % 2 == 0 ? 1.0 : -1.0;
    const double sy = (q + p) % 2 == 0 ? 1.0 : -1.0;
    const double sz = q % 2 == 0 ? 1.0 : -1.0;
    return 0.5 * (ComplexMatrix::Identity(2, 2) + sx * x + sy * y + sz * z);
}

ComplexMatrix odd_a(const OperatorBasis& basis, PhasePoint alpha) {
    const auto& f = basis.field();
    const std::uint32_t d = basis.dim();
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    const FieldElement two_q = f.add(alpha.q, alpha.q);
    for (std::uint32_t k = 0; k < d; ++k) {
        const FieldElement fk{k};
        const FieldElement fl = f.sub(two_q, fk);
        a(k, fl.index) = basis.omega_tr(f.mul(alpha.p, f.sub(fk, fl)));
    }
    return a;
}

}  // namespace

OperatorBasis::OperatorBasis(FiniteField field) : space_(std::move(field)) {
    const std::uint32_t p = space_.field().characteristic();
    omega_.resize(p);
    for (std::uint32_t k = 0; k < p; ++k) {
        omega_[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p));
    }
    // Exact values keep the qubit and qutrit identities free of round-off.
    if (p == 2) omega_[1] = Complex(-1.0, 0.0);
    a_.reserve(space_.num_points());
    for (std::size_t i = 0; i < space_.num_points(); ++i) {
        const PhasePoint alpha = space_.point(i);
        a_.push_back(dim() == 2 ? qubit_a(alpha.q.index, alpha.p.index) : odd_a(*this, alpha));
    }
}

OperatorBasisPtr operator_basis(const FiniteField& field) {
    static std::mutex mutex;
    static std::map<std::tuple<std::uint32_t, std::uint32_t, Polynomial>, OperatorBasisPtr> cache;
    const auto key = std::make_tuple(field.characteristic(), field.degree(), field.modulus());
    std::lock_guard lock(mutex);
    auto& slot = cache[key];
    if (!slot) slot = std::make_shared<const OperatorBasis>(field);
    return slot;
}

ComplexMatrix phase_point_operator(const OperatorBasis& basis, PhasePoint alpha) {
    return basis.a(basis.space().index(alpha));
}

ComplexMatrix displacement_operator(const OperatorBasis& basis, PhasePoint delta) {
    const auto& f = basis.field();
    const std::uint32_t d = basis.dim();
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    Complex phase(1.0, 0.0);
    if (d != 2) phase = basis.omega_tr(f.div(f.mul(delta.q, delta.p), f.from_int(2)));
    for (std::uint32_t m = 0; m < d; ++m) {
        const FieldElement fm{m};
        out(f.add(fm, delta.q).index, m) = phase * basis.omega_tr(f.mul(delta.p, fm));
    }
    return out;
}

ComplexMatrix symplectic_unitary(const OperatorBasis& basis, const SymplecticMatrix& s) {
    const auto& f = basis.field();
    const std::uint32_t d = basis.dim();
    if (!is_legal(f, s)) throw Error("IllegalSymplectic", "no covariant unitary exists for this matrix");
    if (d == 2) {
        const double r = 1.0 / std::sqrt(2.0);
        const Complex i(0.0, 1.0);
        ComplexMatrix u(2, 2);
        if (s == identity_symplectic(f)) {
            u = ComplexMatrix::Identity(2, 2);
        } else if (s.v == f.zero()) {  // R = [[0,1],[1,1]]
            u << r, r, r * i, -r * i;
        } else {  // L = [[1,1],[1,0]]
            u << r, -r * i, r, r * i;
        }
        return u;
    }
    ComplexMatrix u = ComplexMatrix::Zero(d, d);
    const FieldElement half = f.inv(f.from_int(2));
    if (s.x != f.zero()) {
        const FieldElement scale = f.inv(f.add(s.x, s.x));
        const double norm = 1.0 / std::sqrt(static_cast<double>(d));
        for (std::uint32_t k = 0; k < d; ++k) {
            const FieldElement fk{k};
            for (std::uint32_t l = 0; l < d; ++l) {
                const FieldElement fl{l};
                const FieldElement quad = f.add(f.sub(f.mul(s.v, f.mul(fl, fl)), f.mul(f.from_int(2), f.mul(fk, fl))),
                                                f.mul(s.z, f.mul(fk, fk)));
                u(k, l) = norm * basis.omega_tr(f.mul(scale, quad));
            }
        }
    } else {
        for (std::uint32_t l = 0; l < d; ++l) {
            const FieldElement fl{l};
            u(f.mul(s.v, fl).index, l) = basis.omega_tr(f.mul(half, f.mul(s.v, f.mul(s.y, f.mul(fl, fl)))));
        }
    }
    return u;
}

ComplexMatrix a_from_displacements(const OperatorBasis& basis, PhasePoint alpha) {
    const std::uint32_t d = basis.dim();
    if (d == 2) throw Error("UnsupportedDimension", "displacement expansion requires odd d");
    const auto& space = basis.space();
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < space.num_points(); ++i) {
        const PhasePoint delta = space.point(i);
        out += basis.omega_tr(symplectic_product(basis.field(), alpha, delta)) * displacement_operator(basis, delta);
    }
    return out / static_cast<double>(d);
}

std::string to_string(ObjectKind kind) {
    switch (kind) {
        case ObjectKind::State: return "state";
        case ObjectKind::Channel: return "channel";
        case ObjectKind::PovmElement: return "povm-element";
        case ObjectKind::Unitary: return "unitary";
    }
    return "unknown";
}

std::string ValidationReport::summary() const {
    if (valid()) return to_string(kind) + ": valid";
    std::ostringstream os;
    os << to_string(kind) << ":";
    for (const auto& v : violations) os << ' ' << v.condition << " (" << v.magnitude << ")";
    return os.str();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

namespace {

bool check_square(const ComplexMatrix& m, ValidationReport& report) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        report.violations.push_back({"square", static_cast<double>(std::abs(m.rows() - m.cols()))});
        return false;
    }
    return true;
}

void check_hermitian(const ComplexMatrix& m, double tol, ValidationReport& report) {
    const double dev = max_abs_diff(m, m.adjoint());
    if (dev > tol) report.violations.push_back({"hermitian", dev});
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

}  // namespace

ValidationReport validate_state(const ComplexMatrix& w, double tol) {
    ValidationReport report{ObjectKind::State, {}};
    if (!check_square(w, report)) return report;
    check_hermitian(w, tol, report);
    const double tr_dev = std::abs(w.trace() - Complex(1.0, 0.0));
    if (tr_dev > tol) report.violations.push_back({"unit-trace", tr_dev});
    const double min_eig = hermitian_eigenvalues(w).minCoeff();
    if (min_eig < -tol) report.violations.push_back({"positive-semidefinite", -min_eig});
    return report;
}

ValidationReport validate_channel(const Channel& channel, std::size_t dim, double tol) {
    ValidationReport report{ObjectKind::Channel, {}};
    if (channel.kraus.empty()) {
        report.violations.push_back({"nonempty-kraus", 1.0});
        return report;
    }
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix completeness = ComplexMatrix::Zero(n, n);
    ComplexMatrix unitality = ComplexMatrix::Zero(n, n);
    for (const auto& b : channel.kraus) {
        if (b.rows() != n || b.cols() != n) {
            report.violations.push_back({"kraus-dimension", static_cast<double>(std::abs(b.rows() - n))});
            return report;
        }
        completeness.noalias() += b.adjoint() * b;
        unitality.noalias() += b * b.adjoint();
    }
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    if (const double dev = max_abs_diff(completeness, id); dev > tol) {
        report.violations.push_back({"trace-preserving", dev});
    }
    if (const double dev = max_abs_diff(unitality, id); dev > tol) report.violations.push_back({"unital", dev});
    return report;
}

ValidationReport validate_effect(const ComplexMatrix& e, double tol) {
    ValidationReport report{ObjectKind::PovmElement, {}};
    if (!check_square(e, report)) return report;
    check_hermitian(e, tol, report);
    const auto eig = hermitian_eigenvalues(e);
    if (eig.minCoeff() < -tol) report.violations.push_back({"positive-semidefinite", -eig.minCoeff()});
    if (eig.maxCoeff() > 1.0 + tol) report.violations.push_back({"bounded-by-identity", eig.maxCoeff() - 1.0});
    return report;
}

ValidationReport validate_unitary(const ComplexMatrix& u, double tol) {
    ValidationReport report{ObjectKind::Unitary, {}};
    if (!check_square(u, report)) return report;
    const double dev = max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(u.rows(), u.cols()));
    if (dev > tol) report.violations.push_back({"unitary", dev});
    return report;
}

double sandwich_identity_check(const OperatorBasis& basis, const ComplexMatrix& m) {
    const std::uint32_t d = basis.dim();
    ComplexMatrix lhs = ComplexMatrix::Zero(d, d);
    for (std::size_t g = 0; g < basis.num_points(); ++g) lhs.noalias() += basis.a(g) * m * basis.a(g);
    const ComplexMatrix rhs = static_cast<double>(d) * m.trace() * ComplexMatrix::Identity(d, d);
    return max_abs_diff(lhs, rhs);
}

ComplexMatrix line_projector(const OperatorBasis& basis, std::size_t striation, std::size_t intercept) {
    const std::uint32_t d = basis.dim();
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (auto pt : basis.space().points_on(striation, intercept)) out += basis.a(pt);
    return out / static_cast<double>(d);
}

}  // namespace erps
