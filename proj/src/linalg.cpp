#include "sdp/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "sdp/error.hpp"

namespace sdp {

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
    require(m.rows() == m.cols(), "bad_argument", "psd_sqrt: matrix must be square");
    const double scale = m.cwiseAbs().maxCoeff();
    if (m.rows() > 0 && scale > 0.0) {
        const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
        require(asym <= 1e-8 * scale, "bad_argument", "psd_sqrt: matrix is not symmetric");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    require(eig.info() == Eigen::Success, "bad_argument", "psd_sqrt: eigendecomposition failed");

    Eigen::VectorXd vals = eig.eigenvalues();
    const double radius = vals.cwiseAbs().maxCoeff();
    const double tol = 1e-10 * radius;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals[i] < -tol)
            fail("not_psd", "psd_sqrt: matrix is not positive semidefinite (eigenvalue " +
                                std::to_string(vals[i]) + ")");
        vals[i] = vals[i] > 0.0 ? std::sqrt(vals[i]) : 0.0;
    }
    return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

} // namespace sdp
