#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace rhd {

// Matrix exponential by diagonal Pade approximation with scaling and
// squaring. Fixed order [6/6], scaled so the 1-norm of the argument is at
// most 1/4; fully deterministic. Kept independent of the spectral-sum
// semigroup so the two routes can cross-check each other.
template <typename Mat>
Mat expm(const Mat& A) {
    using Scalar = typename Mat::Scalar;
    const Eigen::Index n = A.rows();
    const Mat I = Mat::Identity(n, n);

    double norm1 = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        double col = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) col += std::abs(A(i, j));
        norm1 = std::max(norm1, col);
    }

    int squarings = 0;
    if (norm1 > 0.25) {
        squarings = std::min(static_cast<int>(std::ceil(std::log2(norm1 / 0.25))), 60);
    }
    const Mat As = A / std::pow(2.0, squarings);

    const double b[] = {665280.0, 332640.0, 75600.0, 10080.0, 840.0, 42.0, 1.0};
    const Mat A2 = As * As;
    const Mat A4 = A2 * A2;
    const Mat A6 = A4 * A2;
    const Mat U = As * (Scalar(b[1]) * I + Scalar(b[3]) * A2 + Scalar(b[5]) * A4);
    const Mat V = Scalar(b[0]) * I + Scalar(b[2]) * A2 + Scalar(b[4]) * A4 + Scalar(b[6]) * A6;

    Mat F = (V - U).partialPivLu().solve(V + U);
    for (int s = 0; s < squarings; ++s) F = (F * F).eval();
    return F;
}

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2, matrix-valued,
// computed jointly with e^A from the exponential of the block matrix
// [[A, I, 0], [0, 0, I], [0, 0, 0]]. Used for exponential integrator weights.
template <typename Mat>
void expm_phi12(const Mat& A, Mat& E, Mat& phi1, Mat& phi2) {
    using Scalar = typename Mat::Scalar;
    const Eigen::Index n = A.rows();
    using Dyn = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Dyn W = Dyn::Zero(3 * n, 3 * n);
    W.topLeftCorner(n, n) = A;
    W.block(0, n, n, n) = Dyn::Identity(n, n);
    W.block(n, 2 * n, n, n) = Dyn::Identity(n, n);
    const Dyn F = expm(W);
    E = F.topLeftCorner(n, n);
    phi1 = F.block(0, n, n, n);
    phi2 = F.block(0, 2 * n, n, n);
}

inline std::complex<double> phi1_scalar(std::complex<double> z) {
    if (std::abs(z) < 1e-4) {
        // series to machine precision for small |z|
        return 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
    }
    return (std::exp(z) - 1.0) / z;
}

inline std::complex<double> phi2_scalar(std::complex<double> z) {
    if (std::abs(z) < 1e-4) {
        return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)));
    }
    return (std::exp(z) - 1.0 - z) / (z * z);
}

} // namespace rhd
