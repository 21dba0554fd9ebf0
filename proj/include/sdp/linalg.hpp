#ifndef SDP_LINALG_HPP
#define SDP_LINALG_HPP

#include <Eigen/Core>

namespace sdp {

// Symmetric square root of a positive semidefinite matrix via symmetric
// eigendecomposition. Eigenvalues in [-tol, 0) are clamped to zero, with
// tol = 1e-10 * spectral radius; anything below -tol is an error.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m);

} // namespace sdp

#endif
