#include "sdp/degradation.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "sdp/error.hpp"
#include "sdp/threads.hpp"

namespace sdp {

void DegradationModel::validate() const {
    require(psf.rows() == psf.cols() && psf.rows() >= 1 && psf.rows() % 2 == 1, "bad_argument",
            "degradation: psf must be square and odd-sized");
    require(std::abs(psf.sum() - 1.0) <= 1e-12, "bad_argument",
            "degradation: psf entries must sum to 1");
    require(factor >= 1, "bad_argument", "degradation: factor must be >= 1");
    require(srf.rows() >= 1 && srf.cols() >= 1, "bad_argument", "degradation: empty srf");
    for (Eigen::Index r = 0; r < srf.rows(); ++r)
        for (Eigen::Index c = 0; c < srf.cols(); ++c)
            require(std::isfinite(srf(r, c)) && srf(r, c) >= 0.0, "bad_argument",
                    "degradation: srf entries must be finite and non-negative");
    require(!std::isnan(hsi_snr_db) && !std::isnan(msi_snr_db), "bad_argument",
            "degradation: snr must be finite or infinite, not NaN");
}

Eigen::MatrixXd gaussian_kernel(int size, double sigma) {
    require(size >= 1 && size % 2 == 1, "bad_argument", "gaussian_kernel: size must be odd");
    require(sigma > 0.0, "bad_argument", "gaussian_kernel: sigma must be positive");
    const int c = size / 2;
    Eigen::MatrixXd k(size, size);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
            const double di = i - c, dj = j - c;
            k(i, j) = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
        }
    k /= k.sum();
    return k;
}

HyperCube blur(const HyperCube& cube, const Eigen::MatrixXd& kernel, bool adjoint) {
    require(kernel.rows() == kernel.cols() && kernel.rows() % 2 == 1, "bad_argument",
            "blur: kernel must be square and odd-sized");
    const int k = static_cast<int>(kernel.rows());
    const int cc = k / 2;
    const int h = cube.height, w = cube.width;

    // Wrapped source indices for i in [-cc, dim+cc), indexed by i+cc.
    std::vector<int> wrap_r(static_cast<std::size_t>(h + k - 1));
    std::vector<int> wrap_c(static_cast<std::size_t>(w + k - 1));
    for (int i = 0; i < h + k - 1; ++i) wrap_r[i] = ((i - cc) % h + h) % h;
    for (int i = 0; i < w + k - 1; ++i) wrap_c[i] = ((i - cc) % w + w) % w;

    HyperCube out(cube.bands, h, w);
    auto run_band = [&](int b) {
        const double* src = cube.data.data() + static_cast<std::size_t>(b) * h * w;
        double* dst = out.data.data() + static_cast<std::size_t>(b) * h * w;
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                double acc = 0.0;
                for (int u = 0; u < k; ++u) {
                    const int sr = wrap_r[adjoint ? r + u : r + (k - 1) - u];
                    const double* row = src + static_cast<std::size_t>(sr) * w;
                    for (int v = 0; v < k; ++v) {
                        const int sc = wrap_c[adjoint ? c + v : c + (k - 1) - v];
                        acc += kernel(u, v) * row[sc];
                    }
                }
                dst[static_cast<std::size_t>(r) * w + c] = acc;
            }
    };
    // Bands write disjoint planes, so the result is thread-count independent.
    parallel_for(cube.bands, run_band);
    return out;
}

HyperCube downsample(const HyperCube& cube, int d) {
    require(d >= 1, "bad_argument", "downsample: factor must be >= 1");
    require(cube.height % d == 0 && cube.width % d == 0, "bad_argument",
            "downsample: dims must be divisible by the factor");
    HyperCube out(cube.bands, cube.height / d, cube.width / d);
    for (int b = 0; b < cube.bands; ++b)
        for (int r = 0; r < out.height; ++r)
            for (int c = 0; c < out.width; ++c) out.at(b, r, c) = cube.at(b, r * d, c * d);
    return out;
}

HyperCube upsample_zero_fill(const HyperCube& cube, int d) {
    require(d >= 1, "bad_argument", "upsample_zero_fill: factor must be >= 1");
    HyperCube out(cube.bands, cube.height * d, cube.width * d);
    for (int b = 0; b < cube.bands; ++b)
        for (int r = 0; r < cube.height; ++r)
            for (int c = 0; c < cube.width; ++c) out.at(b, r * d, c * d) = cube.at(b, r, c);
    return out;
}

HyperCube apply_srf(const HyperCube& cube, const Eigen::MatrixXd& srf, bool adjoint) {
    const Eigen::Index in_bands = adjoint ? srf.rows() : srf.cols();
    require(cube.bands == in_bands, "shape_mismatch",
            "apply_srf: cube band count does not match srf");
    const int out_bands = static_cast<int>(adjoint ? srf.cols() : srf.rows());
    HyperCube out(out_bands, cube.height, cube.width);
    const std::size_t np = cube.pixels();
    for (int m = 0; m < out_bands; ++m)
        for (int b = 0; b < cube.bands; ++b) {
            const double wgt = adjoint ? srf(b, m) : srf(m, b);
            if (wgt == 0.0) continue;
            const double* src = cube.data.data() + static_cast<std::size_t>(b) * np;
            double* dst = out.data.data() + static_cast<std::size_t>(m) * np;
            for (std::size_t i = 0; i < np; ++i) dst[i] += wgt * src[i];
        }
    return out;
}

HyperCube add_awgn(const HyperCube& cube, double snr_db, RngStream& rng) {
    require(!std::isnan(snr_db), "bad_argument", "add_awgn: snr must not be NaN");
    HyperCube out = cube;
    if (std::isinf(snr_db)) return out;
    double power = 0.0;
    for (double v : cube.data) power += v * v;
    power /= static_cast<double>(cube.data.size());
    const double sigma = std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
    if (sigma == 0.0) return out;
    for (double& v : out.data) v += sigma * rng.gaussian();
    return out;
}

Eigen::MatrixXd make_ikonos_like_srf(int n_bands) {
    require(n_bands >= 1, "bad_argument", "make_ikonos_like_srf: n_bands must be >= 1");
    // Relative band centers/widths of the blue, green, red and NIR responses.
    const double centers[4] = {0.12, 0.32, 0.52, 0.78};
    const double widths[4] = {0.07, 0.08, 0.08, 0.13};
    Eigen::MatrixXd srf(4, n_bands);
    for (int m = 0; m < 4; ++m) {
        for (int b = 0; b < n_bands; ++b) {
            const double pos = n_bands == 1 ? 0.5 : static_cast<double>(b) / (n_bands - 1);
            const double z = (pos - centers[m]) / widths[m];
            srf(m, b) = std::exp(-0.5 * z * z);
        }
        srf.row(m) /= srf.row(m).sum();
    }
    return srf;
}

} // namespace sdp
