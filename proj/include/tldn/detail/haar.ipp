#pragma once

#include <cmath>
#include <random>

#include <Eigen/QR>

namespace tldn {

template <class Rng>
ComplexMatrix haar_unitary(Index n, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex{re, im};
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& r = qr.matrixQR();
    for (Index k = 0; k < n; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) q.col(k) *= r(k, k) / mag;
    }
    return ComplexMatrix(std::move(q));
}

}  // namespace tldn
