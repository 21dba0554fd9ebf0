#ifndef SDP_DEGRADATION_HPP
#define SDP_DEGRADATION_HPP

#include <limits>

#include <Eigen/Core>

#include "sdp/cube.hpp"
#include "sdp/rng.hpp"

namespace sdp {

// The linear observation operators of the two degradation chains: PSF blur
// (circular boundary), grid decimation, spectral response, plus SNR noise.
struct DegradationModel {
    Eigen::MatrixXd psf;  // k x k, entries sum to 1
    int factor = 1;       // spatial decimation d
    Eigen::MatrixXd srf;  // N_b x N_B, non-negative
    double hsi_snr_db = std::numeric_limits<double>::infinity();
    double msi_snr_db = std::numeric_limits<double>::infinity();

    void validate() const;
};

// Isotropic Gaussian sampled on the integer grid around the kernel center,
// then normalized to sum 1. size must be odd.
Eigen::MatrixXd gaussian_kernel(int size, double sigma);

// Per-band 2-D circular convolution. adjoint=true applies the exact adjoint
// (correlation, i.e. convolution with the 180-degree rotated kernel).
HyperCube blur(const HyperCube& cube, const Eigen::MatrixXd& kernel, bool adjoint = false);

// Decimation keeping samples at (d*i, d*j); zero-fill upsampling is its
// exact adjoint.
HyperCube downsample(const HyperCube& cube, int d);
HyperCube upsample_zero_fill(const HyperCube& cube, int d);

// Per-pixel R*x (forward) or R^T*z (adjoint).
HyperCube apply_srf(const HyperCube& cube, const Eigen::MatrixXd& srf, bool adjoint = false);

// AWGN with sigma^2 = mean(cube^2) * 10^(-snr_db/10). Infinite SNR is a no-op.
HyperCube add_awgn(const HyperCube& cube, double snr_db, RngStream& rng);

// Four Gaussian-profile bands (blue/green/red/NIR) spread over [0, n_bands),
// each row normalized to sum 1. Stand-in for the IKONOS response when no SRF
// file is supplied; any measured SRF table can be loaded from CSV instead.
Eigen::MatrixXd make_ikonos_like_srf(int n_bands);

} // namespace sdp

#endif
