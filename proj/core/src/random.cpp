#include "erps/random.hpp"

#include <cmath>

namespace erps {

ComplexMatrix RandomSource::ginibre(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(normal(), normal());
    }
    return g;
}

ComplexMatrix RandomSource::unitary(std::size_t dim) {
    Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(dim));
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR();
    // Fix column phases so the distribution is Haar.
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        const Complex diag = r(j, j);
        if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
    }
    return q;
}

Eigen::VectorXcd RandomSource::ket(std::size_t dim) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    for (auto& c : v) c = Complex(normal(), normal());
    return v.normalized();
}

ComplexMatrix RandomSource::pure_state(std::size_t dim) {
    const auto v = ket(dim);
    return v * v.adjoint();
}

ComplexMatrix RandomSource::mixed_state(std::size_t dim) {
    const ComplexMatrix g = ginibre(dim);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

Channel RandomSource::unital_channel(std::size_t dim, std::size_t terms) {
    std::vector<double> weights(terms);
    double total = 0.0;
    for (auto& w : weights) total += (w = uniform() + 1e-3);
    Channel ch;
    for (std::size_t k = 0; k < terms; ++k) ch.kraus.push_back(std::sqrt(weights[k] / total) * unitary(dim));
    return ch;
}

ComplexMatrix RandomSource::effect(std::size_t dim) {
    const ComplexMatrix u = unitary(dim);
    Eigen::VectorXd lambda(static_cast<Eigen::Index>(dim));
    for (auto& l : lambda) l = uniform();
    ComplexMatrix e = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
    return 0.5 * (e + e.adjoint());
}

}  // namespace erps
