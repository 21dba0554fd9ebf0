#include "sdp/cube.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "sdp/error.hpp"

namespace sdp {

HyperCube::HyperCube(int b, int h, int w, double fill)
    : bands(b), height(h), width(w),
      data(static_cast<std::size_t>(b) * h * w, fill) {
    require(b >= 1 && h >= 1 && w >= 1, "bad_argument", "HyperCube: all dims must be >= 1");
}

void validate_cube(const HyperCube& cube) {
    require(cube.bands >= 1 && cube.height >= 1 && cube.width >= 1, "bad_argument",
            "cube: all dims must be >= 1");
    require(cube.data.size() == static_cast<std::size_t>(cube.bands) * cube.height * cube.width,
            "shape_mismatch", "cube: data length does not match bands*height*width");
    for (double v : cube.data)
        require(std::isfinite(v), "non_finite", "cube: non-finite value");
}

SpectrumBatch cube_to_spectra(const HyperCube& cube) {
    const int n = static_cast<int>(cube.pixels());
    SpectrumBatch batch(n, cube.bands);
    // Column-major batch buffer == band-major cube buffer; a straight copy.
    std::memcpy(batch.data.data(), cube.data.data(), cube.data.size() * sizeof(double));
    return batch;
}

HyperCube spectra_to_cube(const SpectrumBatch& batch, int height, int width) {
    require(static_cast<long long>(height) * width == batch.count, "shape_mismatch",
            "spectra_to_cube: count must equal height*width");
    HyperCube cube(batch.bands, height, width);
    std::memcpy(cube.data.data(), batch.data.data(), cube.data.size() * sizeof(double));
    return cube;
}

std::pair<HyperCube, HyperCube> split_top_bottom(const HyperCube& cube) {
    require(cube.height % 2 == 0, "bad_argument", "split_top_bottom: height must be even");
    const int half = cube.height / 2;
    HyperCube top(cube.bands, half, cube.width);
    HyperCube bottom(cube.bands, half, cube.width);
    for (int b = 0; b < cube.bands; ++b)
        for (int r = 0; r < half; ++r)
            for (int c = 0; c < cube.width; ++c) {
                top.at(b, r, c) = cube.at(b, r, c);
                bottom.at(b, r, c) = cube.at(b, r + half, c);
            }
    return {std::move(top), std::move(bottom)};
}

std::pair<double, double> scale_to_unit(HyperCube& cube) {
    auto [lo_it, hi_it] = std::minmax_element(cube.data.begin(), cube.data.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi > lo) {
        const double inv = 1.0 / (hi - lo);
        for (double& v : cube.data) v = (v - lo) * inv;
    } else {
        std::fill(cube.data.begin(), cube.data.end(), 0.0);
    }
    return {lo, hi};
}

} // namespace sdp
