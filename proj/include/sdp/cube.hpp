#ifndef SDP_CUBE_HPP
#define SDP_CUBE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace sdp {

// Band-major, then row-major image cube. Clean data lives in [0, 1]; noisy
// observations may step outside that range.
struct HyperCube {
    int bands = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data; // size = bands * height * width

    HyperCube() = default;
    HyperCube(int b, int h, int w, double fill = 0.0);

    std::size_t pixels() const noexcept {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }
    std::size_t size() const noexcept { return data.size(); }

    double& at(int b, int r, int c) {
        return data[(static_cast<std::size_t>(b) * height + r) * width + c];
    }
    double at(int b, int r, int c) const {
        return data[(static_cast<std::size_t>(b) * height + r) * width + c];
    }

    bool same_shape(const HyperCube& o) const noexcept {
        return bands == o.bands && height == o.height && width == o.width;
    }
};

// N spectra as rows of an N x bands matrix. Stored column-major, so the
// underlying buffer coincides with a band-major cube's layout.
struct SpectrumBatch {
    int count = 0;
    int bands = 0;
    Eigen::MatrixXd data; // count x bands

    SpectrumBatch() = default;
    SpectrumBatch(int n, int b) : count(n), bands(b), data(Eigen::MatrixXd::Zero(n, b)) {}
};

void validate_cube(const HyperCube& cube);

// Pixel (r, c) of the cube becomes row r*width + c of the batch.
SpectrumBatch cube_to_spectra(const HyperCube& cube);
HyperCube spectra_to_cube(const SpectrumBatch& batch, int height, int width);

// Top/bottom split along the height axis (training pixels vs reference).
std::pair<HyperCube, HyperCube> split_top_bottom(const HyperCube& cube);

// Global affine min-max rescale onto [0, 1]; returns (lo, hi) of the input.
std::pair<double, double> scale_to_unit(HyperCube& cube);

} // namespace sdp

#endif
