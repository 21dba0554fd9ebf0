#ifndef SDP_TEST_ORACLES_HPP
#define SDP_TEST_ORACLES_HPP

// Independent brute-force reference implementations used as test oracles.
// These deliberately avoid the library's code paths: plain loops, their own
// statistics, and a different algebraic route where one exists.

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "sdp/cube.hpp"

namespace oracle {

struct RefMetrics {
    double psnr_db = 0.0;
    double sam_deg = 0.0;
    double rmse = 0.0;
    double ergas = 0.0;
    double uiqi = 0.0;
};

RefMetrics full_reference(const sdp::HyperCube& ref, const sdp::HyperCube& est, int ratio);

// FID through the eigenvalues of cov1*cov2 (tr sqrt(S1*cov2*S1) equals the
// sum of sqrt eigenvalues of the product), a route the library never takes.
double fid(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct RefNoRef {
    double d_lambda = 0.0;
    double d_s = 0.0;
    double qnr = 0.0;
};

RefNoRef no_reference(const sdp::HyperCube& fused, const sdp::HyperCube& lr,
                      const sdp::HyperCube& msi, const Eigen::MatrixXd& psf, int factor);

// Reference scalar Adam (bias-corrected, the textbook update).
struct ScalarAdam {
    double m = 0.0, v = 0.0;
    long t = 0;
    double step(double param, double grad, double lr, double b1 = 0.9, double b2 = 0.999,
                double eps = 1e-8);
};

// Exact mean of q(x_{t-1} | x_t, x_0) from the standard DDPM posterior.
double ddpm_posterior_mean_ref(double x_t, double x0, double beta_t, double abar_t,
                               double abar_prev);

// Central finite difference of a scalar function of one coordinate.
double central_diff(const std::function<double(double)>& f, double x, double h);

double relative_error(double got, double want);

// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

} // namespace oracle

#endif
